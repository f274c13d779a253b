#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wpdkit/diagram.hpp"
#include "wpdkit/examples.hpp"
#include "wpdkit/homology.hpp"

using namespace wpdkit;

namespace {

bool is_face(const Simplex& f, const Simplex& s) {
  return f.size() + 1 == s.size() && std::includes(s.begin(), s.end(), f.begin(), f.end());
}

// Rows: (d-1)-simplices, columns: d-simplices, restricted to the first `cols` columns.
oracle::Dense dense_boundary(const VRFiltration& f, int d, std::size_t cols) {
  const auto& lo = f.simplices(d - 1);
  const auto& hi = f.simplices(d);
  oracle::Dense m(lo.size(), std::vector<int>(cols, 0));
  for (std::size_t r = 0; r < lo.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m[r][c] = is_face(lo[r].vertices, hi[c].vertices);
  return m;
}

long long zb_oracle(const VRFiltration& f, int d, std::size_t i, std::size_t j) {
  const std::size_t nd = f.simplices(d).size();
  const std::size_t zi = f.count(d, i);
  oracle::Dense z;
  if (d == 0) {
    for (std::size_t c = 0; c < zi; ++c) {
      std::vector<int> e(nd, 0);
      e[c] = 1;
      z.push_back(e);
    }
  } else {
    for (auto v : oracle::dense_nullspace(dense_boundary(f, d, zi), zi)) {
      v.resize(nd, 0);
      z.push_back(v);
    }
  }
  oracle::Dense b;
  const auto bm = dense_boundary(f, d + 1, f.count(d + 1, j));
  for (std::size_t c = 0; c < f.count(d + 1, j); ++c) {
    std::vector<int> v(nd);
    for (std::size_t r = 0; r < nd; ++r) v[r] = bm[r][c];
    b.push_back(v);
  }
  oracle::Dense both = z;
  both.insert(both.end(), b.begin(), b.end());
  return static_cast<long long>(oracle::dense_rank(z) + oracle::dense_rank(b)) -
         static_cast<long long>(oracle::dense_rank(both));
}

}  // namespace

TEST_CASE("boundary_matrix") {
  SimplicialComplex edge(2);
  edge.insert_closed({0, 1});
  const auto b1 = boundary_matrix(edge, 1);
  CHECK(b1.rows() == 2);
  CHECK(b1.cols() == 1);
  CHECK(b1.get(0, 0));
  CHECK(b1.get(1, 0));
  CHECK(boundary_matrix(edge, 0).rows() == 0);
  CHECK(boundary_matrix(edge, 0).cols() == 2);
  CHECK(boundary_matrix(edge, 3).cols() == 0);

  SimplicialComplex tri(3);
  tri.insert_closed({0, 1, 2});
  CHECK(boundary_matrix(tri, 2).column(0).count() == 3);

  const auto full = vr_complex(examples::ums_x().space(), 2, 3);
  const auto b = boundary_matrix(full, 1);
  CHECK(b.cols() == 6);
  for (std::size_t c = 0; c < 6; ++c) CHECK(b.column(c).count() == 2);
  // boundary of boundary vanishes
  const auto b2 = boundary_matrix(full, 2);
  for (std::size_t c = 0; c < b2.cols(); ++c) {
    BitVector acc(b.rows());
    b2.column(c).for_each_set([&](std::size_t e) { acc ^= b.column(e); });
    CHECK(acc.none());
  }
}

TEST_CASE("gf2_rank") {
  CHECK(gf2_rank(BitMatrix(3, 4)) == 0);
  CHECK(gf2_rank(BitMatrix::identity(5)) == 5);
  SimplicialComplex path(3);
  path.insert_closed({0, 1});
  path.insert_closed({1, 2});
  CHECK(gf2_rank(boundary_matrix(path, 1)) == 2);
  // cycle graph: rank n - 1
  SimplicialComplex cyc(4);
  for (std::size_t v = 0; v < 4; ++v) cyc.insert_closed({v, (v + 1) % 4});
  CHECK(gf2_rank(boundary_matrix(cyc, 1)) == 3);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const std::size_t r = 1 + rng() % 70, c = 1 + rng() % 70;
    BitMatrix m(r, c);
    oracle::Dense d(r, std::vector<int>(c, 0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (rng() % 3 == 0) {
          m.set(i, j);
          d[i][j] = 1;
        }
    CHECK(gf2_rank(m) == oracle::dense_rank(d));
  }
}

TEST_CASE("zb_function examples") {
  const auto edge = vr_filtration(FiniteMetricSpace::unchecked(2, {0, 1, 1, 0}), 1);
  const auto zb = zb_function(edge, 0);
  CHECK(zb.at(0, 0) == 0);
  CHECK(zb.at(0, 1) == 1);
  CHECK(zb.at(1, 1) == 1);

  const auto x = vr_filtration(examples::ums_x().space(), 2);
  const auto zx = zb_function(x, 1);
  // no 1-cycles exist before the top value; there every cycle bounds (3 independent ones)
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) CHECK(zx.at(i, j) == (i == 2 ? 3 : 0));

  CHECK_THROWS_AS(zb_function(x, 2), ValidationError);
  CHECK_THROWS_AS(zb_function(x, -1), ValidationError);
}

TEST_CASE("zb_function agrees with dense linear algebra") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 3 + rng() % 4;
    const auto x = t % 3 ? oracle::random_planar(rng, n) : oracle::random_two_valued(rng, n);
    const auto f = vr_filtration(x, 2);
    for (int d = 0; d <= 1; ++d) {
      const auto zb = zb_function(f, d);
      const auto zdims = cycle_dimensions(f, d);
      const auto bdims = boundary_dimensions(f, d);
      const std::size_t k = f.grid().size();
      for (std::size_t i = 0; i < k; ++i) {
        // rank-nullity bookkeeping
        const std::size_t nd = f.count(d, i);
        const std::size_t rank = d == 0 ? 0 : oracle::dense_rank(dense_boundary(f, d, nd));
        CHECK(zdims[i] + rank == nd);
        for (std::size_t j = i; j < k; ++j) {
          CHECK(zb.at(i, j) == zb_oracle(f, d, i, j));
          if (i > 0) CHECK(zb.at(i - 1, j) <= zb.at(i, j));
          if (j > i) CHECK(zb.at(i, j - 1) <= zb.at(i, j));
        }
      }
      // top value: all boundaries are cycles
      CHECK(static_cast<std::size_t>(zb.at(k - 1, k - 1)) == bdims[k - 1]);
    }
  }
}

TEST_CASE("pd_reduction_oracle") {
  const auto two = vr_filtration(FiniteMetricSpace::unchecked(2, {0, 3, 3, 0}), 1);
  const auto p2 = pd_reduction_oracle(two, 0);
  CHECK(p2.bars().size() == 1);
  CHECK(p2.multiplicity(0, 1) == 1);

  const auto x = vr_filtration(examples::ums_x().space(), 2);
  const auto p0 = pd_reduction_oracle(x, 0);
  CHECK(p0.off_diagonal() == std::map<IntervalIndex, long long>{{{0, 1}, 2}, {{0, 2}, 1}});
  CHECK(pd_reduction_oracle(x, 1).bar_count() == 0);

  // tie order inside a grid value does not matter
  std::mt19937_64 rng(77);
  for (int t = 0; t < 20; ++t) {
    const auto f = vr_filtration(oracle::random_two_valued(rng, 4 + rng() % 3), 2);
    for (int d = 0; d <= 1; ++d) {
      const auto base = pd_reduction_oracle(f, d).off_diagonal();
      for (std::uint64_t s = 1; s <= 4; ++s) CHECK(pd_reduction_oracle(f, d, s).off_diagonal() == base);
    }
  }
}
