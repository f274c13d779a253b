#include "wpdkit/homology.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "wpdkit/diagram.hpp"

namespace wpdkit {

BitMatrix BitMatrix::identity(std::size_t k) {
  BitMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) m.set(i, i);
  return m;
}

namespace {

// Incremental echelon basis: each stored vector has a distinct highest set bit.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t dim) : pivot_(dim, -1) {}

  /// Reduces v against the basis; inserts it if independent. Returns true on insertion.
  bool insert(BitVector v) {
    for (auto low = v.highest(); low >= 0; low = v.highest()) {
      const auto slot = pivot_[static_cast<std::size_t>(low)];
      if (slot < 0) {
        pivot_[static_cast<std::size_t>(low)] = static_cast<std::ptrdiff_t>(rows_.size());
        rows_.push_back(std::move(v));
        return true;
      }
      v ^= rows_[static_cast<std::size_t>(slot)];
    }
    return false;
  }
  std::size_t rank() const noexcept { return rows_.size(); }

 private:
  std::vector<std::ptrdiff_t> pivot_;
  std::vector<BitVector> rows_;
};

void check_degree(const VRFiltration& f, int degree) {
  if (degree < 0 || degree + 1 > f.max_dim())
    throw ValidationError("degree " + std::to_string(degree) + " out of range (needs degree + 1 <= max_dim = " +
                          std::to_string(f.max_dim()) + ")");
}

// Face positions of every column simplex inside a row list, via binary search on
// the row list sorted lexicographically.
template <typename RowList, typename Key>
BitMatrix boundary_from_lists(const RowList& rows, std::size_t ncols, std::size_t nrows, Key&& column_vertices) {
  std::vector<std::size_t> order(nrows);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows(a) < rows(b); });
  BitMatrix m(nrows, ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    const Simplex& s = column_vertices(c);
    if (s.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex face;
      for (std::size_t t = 0; t < s.size(); ++t)
        if (t != drop) face.push_back(s[t]);
      auto it = std::lower_bound(order.begin(), order.end(), face,
                                 [&](std::size_t r, const Simplex& key) { return rows(r) < key; });
      if (it == order.end() || rows(*it) != face) throw InternalError("boundary face missing from complex");
      m.set(*it, c);
    }
  }
  return m;
}

}  // namespace

std::size_t gf2_rank(const BitMatrix& m) {
  EchelonBasis basis(m.rows());
  for (std::size_t c = 0; c < m.cols(); ++c) basis.insert(m.column(c));
  return basis.rank();
}

BitMatrix boundary_matrix(const SimplicialComplex& k, int d) {
  if (d < 0) throw ValidationError("negative degree");
  const auto& cols = k.simplices(d);
  if (d == 0) return BitMatrix(0, cols.size());
  const auto& rows = k.simplices(d - 1);
  return boundary_from_lists([&](std::size_t r) -> const Simplex& { return rows[r]; }, cols.size(), rows.size(),
                             [&](std::size_t c) -> const Simplex& { return cols[c]; });
}

BitMatrix boundary_matrix(const VRFiltration& f, int d) {
  if (d < 0) throw ValidationError("negative degree");
  const auto& cols = f.simplices(d);
  if (d == 0) return BitMatrix(0, cols.size());
  const auto& rows = f.simplices(d - 1);
  return boundary_from_lists([&](std::size_t r) -> const Simplex& { return rows[r].vertices; }, cols.size(),
                             rows.size(), [&](std::size_t c) -> const Simplex& { return cols[c].vertices; });
}

// ---------------------------------------------------------------------------
// Birth-death function
// ---------------------------------------------------------------------------

BirthDeathFunction::BirthDeathFunction(CriticalGrid grid, int degree)
    : grid_(std::move(grid)), degree_(degree), table_(grid_.size() * grid_.size(), 0) {}

long long BirthDeathFunction::at(std::size_t i, std::size_t j) const {
  if (i > j || j >= grid_.size()) throw ValidationError("interval index out of range");
  return table_[i * grid_.size() + j];
}

void BirthDeathFunction::set(std::size_t i, std::size_t j, long long v) {
  if (i > j || j >= grid_.size()) throw ValidationError("interval index out of range");
  table_[i * grid_.size() + j] = v;
}

namespace {

// Left-to-right column reduction of the d-boundary matrix. The returned V-columns of
// zero reduced columns span the kernel; restricted to the first c columns they span
// the kernel of the first c columns.
std::vector<std::pair<std::size_t, BitVector>> kernel_basis(const VRFiltration& f, int degree) {
  const std::size_t n = f.simplices(degree).size();
  std::vector<std::pair<std::size_t, BitVector>> kernel;
  if (degree == 0) {
    for (std::size_t c = 0; c < n; ++c) {
      BitVector e(n);
      e.set(c);
      kernel.emplace_back(c, std::move(e));
    }
    return kernel;
  }
  const BitMatrix b = boundary_matrix(f, degree);
  std::vector<std::ptrdiff_t> owner(b.rows(), -1);  // pivot row -> column index
  std::vector<BitVector> r(n), v(n);
  for (std::size_t c = 0; c < n; ++c) {
    r[c] = b.column(c);
    v[c] = BitVector(n);
    v[c].set(c);
    for (auto low = r[c].highest(); low >= 0; low = r[c].highest()) {
      const auto o = owner[static_cast<std::size_t>(low)];
      if (o < 0) {
        owner[static_cast<std::size_t>(low)] = static_cast<std::ptrdiff_t>(c);
        break;
      }
      r[c] ^= r[static_cast<std::size_t>(o)];
      v[c] ^= v[static_cast<std::size_t>(o)];
    }
    if (r[c].none()) kernel.emplace_back(c, v[c]);
  }
  return kernel;
}

}  // namespace

std::vector<std::size_t> cycle_dimensions(const VRFiltration& f, int degree) {
  if (degree < 0 || degree > f.max_dim()) throw ValidationError("degree out of range");
  const auto kernel = kernel_basis(f, degree);
  std::vector<std::size_t> dims(f.grid().size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::size_t limit = f.count(degree, i);
    dims[i] = static_cast<std::size_t>(
        std::count_if(kernel.begin(), kernel.end(), [&](const auto& kv) { return kv.first < limit; }));
  }
  return dims;
}

std::vector<std::size_t> boundary_dimensions(const VRFiltration& f, int degree) {
  check_degree(f, degree);
  const BitMatrix b = boundary_matrix(f, degree + 1);
  EchelonBasis basis(b.rows());
  std::vector<std::size_t> dims(f.grid().size());
  std::size_t added = 0;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    for (; added < f.count(degree + 1, j); ++added) basis.insert(b.column(added));
    dims[j] = basis.rank();
  }
  return dims;
}

BirthDeathFunction zb_function(const VRFiltration& f, int degree) {
  check_degree(f, degree);
  const std::size_t k = f.grid().size();
  const std::size_t nd = f.simplices(degree).size();
  const auto kernel = kernel_basis(f, degree);
  const BitMatrix bnd = boundary_matrix(f, degree + 1);
  const auto bdims = boundary_dimensions(f, degree);
  BirthDeathFunction zb(f.grid(), degree);
  for (std::size_t i = 0; i < k; ++i) {
    // Start from a basis of Z_d(F(q_i)), then add boundaries in order of appearance.
    EchelonBasis basis(nd);
    std::size_t zdim = 0;
    for (const auto& [col, vec] : kernel)
      if (col < f.count(degree, i)) {
        basis.insert(vec);
        ++zdim;
      }
    if (basis.rank() != zdim) throw InternalError("kernel basis is not independent");
    std::size_t added = 0;
    for (std::size_t j = 0; j < k; ++j) {
      for (; added < f.count(degree + 1, j); ++added) basis.insert(bnd.column(added));
      if (j < i) continue;
      const auto value = static_cast<long long>(zdim + bdims[j]) - static_cast<long long>(basis.rank());
      zb.set(i, j, value);
    }
  }
  return zb;
}

// ---------------------------------------------------------------------------
// Reduction oracle
// ---------------------------------------------------------------------------

PersistenceDiagram pd_reduction_oracle(const VRFiltration& f, int degree, std::optional<std::uint64_t> tie_seed) {
  check_degree(f, degree);
  const auto& rows = f.simplices(degree);
  const auto& cols = f.simplices(degree + 1);

  // Processing orders: filtration order, optionally shuffled inside each grid value.
  const auto make_order = [&](const std::vector<FilteredSimplex>& list, std::mt19937_64* rng) {
    std::vector<std::size_t> order(list.size());
    std::iota(order.begin(), order.end(), 0);
    if (rng) {
      std::size_t start = 0;
      while (start < order.size()) {
        std::size_t end = start;
        while (end < order.size() && list[end].grid_index == list[start].grid_index) ++end;
        std::shuffle(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end),
                     *rng);
        start = end;
      }
    }
    return order;
  };
  std::mt19937_64 rng(tie_seed.value_or(0));
  const auto row_order = make_order(rows, tie_seed ? &rng : nullptr);
  const auto col_order = make_order(cols, tie_seed ? &rng : nullptr);
  std::vector<std::size_t> row_rank(rows.size());
  for (std::size_t r = 0; r < row_order.size(); ++r) row_rank[row_order[r]] = r;

  const BitMatrix b = boundary_matrix(f, degree + 1);
  std::vector<BitVector> reduced;
  std::vector<std::ptrdiff_t> owner(rows.size(), -1);
  PersistenceDiagram pd(f.grid(), degree);
  for (std::size_t c : col_order) {
    BitVector col(rows.size());
    b.column(c).for_each_set([&](std::size_t r) { col.set(row_rank[r]); });
    for (auto low = col.highest(); low >= 0; low = col.highest()) {
      const auto o = owner[static_cast<std::size_t>(low)];
      if (o < 0) {
        owner[static_cast<std::size_t>(low)] = static_cast<std::ptrdiff_t>(reduced.size());
        const std::size_t birth = rows[row_order[static_cast<std::size_t>(low)]].grid_index;
        const std::size_t death = cols[c].grid_index;
        if (birth < death) pd.add(birth, death, 1);
        break;
      }
      col ^= reduced[static_cast<std::size_t>(o)];
    }
    reduced.push_back(std::move(col));
  }
  return pd;
}

}  // namespace wpdkit
