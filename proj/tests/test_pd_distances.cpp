#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "wpdkit/examples.hpp"
#include "wpdkit/homology.hpp"
#include "wpdkit/pd_distances.hpp"

using namespace wpdkit;

namespace {

CriticalGrid steps(std::size_t k, double h = 1.0) {
  std::vector<double> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(h * static_cast<double>(i));
  return CriticalGrid(v);
}

PersistenceDiagram diagram(const CriticalGrid& g, std::vector<std::pair<IntervalIndex, long long>> bars) {
  PersistenceDiagram d(g);
  for (const auto& [iv, k] : bars) d.add(iv.first, iv.second, k);
  return d;
}

PersistenceDiagram random_diagram(std::mt19937_64& rng, const CriticalGrid& g, std::size_t max_bars) {
  PersistenceDiagram d(g);
  const std::size_t k = rng() % (max_bars + 1);
  for (std::size_t b = 0; b < k; ++b) {
    std::size_t i = rng() % g.size(), j = rng() % g.size();
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    d.add(i, j, 1);
  }
  return d;
}

// Weight on [0,0], every bar, and possibly one more interval.
WeightedPersistenceDiagram random_weighted(std::mt19937_64& rng, const CriticalGrid& g, std::size_t max_bars) {
  PersistenceDiagram d(g);
  std::set<IntervalIndex> support{{0, 0}};
  const std::size_t k = 1 + rng() % max_bars;
  for (std::size_t b = 0; b < k; ++b) {
    std::size_t i = rng() % g.size(), j = rng() % g.size();
    if (i > j) std::swap(i, j);
    support.insert({i, j});
    if (i < j && d.bar_count() < static_cast<long long>(max_bars) && rng() % 3) d.add(i, j, 1);
  }
  const auto mass = oracle::random_measure(rng, support.size());
  IntervalMeasure w;
  std::size_t c = 0;
  for (const auto& iv : support) w[iv] = mass[c++];
  return WeightedPersistenceDiagram(d, w);
}

}  // namespace

TEST_CASE("defo") {
  CHECK(defo({0, 1}, {0, 1}, {0, 3}, {0, 3}) == 2.0);
  CHECK(defo({0, 2}, {1, 3}, {0, 1}, {1, 2}) == 1.0);
  CHECK(defo({0, 2}, {1, 3}, {0, 2}, {1, 3}) == 0.0);
  CHECK(defo({0, 0}, {0, 2}, {0, 0}, {1, 3}) == 1.0);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> v(0, 4);
  const auto iv = [&] {
    int a = v(rng), b = v(rng);
    if (a > b) std::swap(a, b);
    return Interval{static_cast<double>(a), static_cast<double>(b)};
  };
  for (int t = 0; t < 2000; ++t) {
    const Interval i1 = iv(), i2 = iv(), j1 = iv(), j2 = iv();
    const double d = defo(i1, i2, j1, j2);
    CHECK(d == defo(i2, i1, j2, j1));
    CHECK(d >= 0.0);
    const bool same_shift = i1.birth - i2.birth == j1.birth - j2.birth;
    const bool same_len = i1.death - i1.birth == j1.death - j1.birth && i2.death - i2.birth == j2.death - j2.birth;
    CHECK((d == 0.0) == (same_shift && same_len));
  }
}

TEST_CASE("validate_matching") {
  const auto g = steps(4);
  const auto s = diagram(g, {{{0, 2}, 1}, {{1, 3}, 2}});
  Matching id{g, g, {{{{0, 0}, {0, 0}}, 1}, {{{0, 2}, {0, 2}}, 1}, {{{1, 3}, {1, 3}}, 2}}};
  CHECK(validate_matching(id, s, s).valid);
  CHECK(defcost(id) == 0.0);

  // one copy of [1,3] sent to the diagonal [2,2] of the target grid
  const auto t = diagram(g, {{{0, 2}, 1}, {{1, 3}, 1}});
  Matching to_diag{g, g, {{{{0, 0}, {0, 0}}, 1}, {{{0, 2}, {0, 2}}, 1}, {{{1, 3}, {1, 3}}, 1}, {{{1, 3}, {2, 2}}, 1}}};
  CHECK(validate_matching(to_diag, s, t).valid);
  to_diag.cells[{{1, 3}, {2, 2}}] = 2;
  const auto bad = validate_matching(to_diag, s, t);
  CHECK_FALSE(bad.valid);
  CHECK_FALSE(bad.problems.empty());

  Matching no_anchor = id;
  no_anchor.cells.erase({{0, 0}, {0, 0}});
  CHECK_FALSE(validate_matching(no_anchor, s, s).valid);

  Matching unmatched = id;
  unmatched.cells.erase({{0, 2}, {0, 2}});
  CHECK_FALSE(validate_matching(unmatched, s, s).valid);
}

TEST_CASE("defcost") {
  const auto g = steps(4);
  Matching m{g, g, {{{{0, 0}, {0, 0}}, 1}, {{{0, 2}, {1, 3}}, 1}}};
  CHECK(defcost(m) == 1.0);

  // product coupling, p = 1, against a direct double sum
  std::mt19937_64 rng(5);
  const auto w = random_weighted(rng, g, 2);
  WeightedMatching wm;
  wm.gamma = Matching{g, g, {{{{0, 0}, {0, 0}}, 1}}};
  for (const auto& [a, ma] : w.weight())
    for (const auto& [b, mb] : w.weight()) wm.eta[{a, b}] = ma * mb;
  double direct = 0.0;
  for (const auto& [c1, m1] : wm.eta)
    for (const auto& [c2, m2] : wm.eta)
      direct += m1 * m2 * defo({g[c1.first.first], g[c1.first.second]}, {g[c2.first.first], g[c2.first.second]},
                               {g[c1.second.first], g[c1.second.second]}, {g[c2.second.first], g[c2.second.second]});
  CHECK(std::abs(defcost_p(wm, 1.0) - direct) <= 1e-12);
  std::set<MatchingCell> support;
  for (const auto& [c, mass] : wm.eta) support.insert(c);
  CHECK(std::abs(defcost_p(wm, kInfinity) - oracle::support_cost(g, g, support)) <= 1e-12);
  CHECK_THROWS_AS(defcost_p(wm, 0.5), ValidationError);
}

TEST_CASE("defcost_p is monotone in p") {
  std::mt19937_64 rng(17);
  const auto g = steps(4);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_weighted(rng, g, 2), u = random_weighted(rng, g, 2);
    std::vector<double> a, b;
    for (const auto& [iv, m] : s.weight()) a.push_back(m);
    for (const auto& [iv, m] : u.weight()) b.push_back(m);
    const auto plan = oracle::random_coupling(rng, a, b);
    WeightedMatching wm;
    wm.gamma = Matching{g, g, {{{{0, 0}, {0, 0}}, 1}}};
    std::size_t k = 0;
    for (const auto& [i, mi] : s.weight())
      for (const auto& [j, mj] : u.weight()) {
        if (plan[k] > 0.0) wm.eta[{i, j}] = plan[k];
        ++k;
      }
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0, kInfinity}) {
      const double c = defcost_p(wm, p);
      CHECK(c >= prev - 1e-12);
      prev = c;
    }
  }
}

TEST_CASE("d_defo_exact examples") {
  const auto g = steps(4);
  const auto a = diagram(g, {{{0, 2}, 1}});
  const auto b = diagram(g, {{{1, 3}, 1}});
  const auto r = d_defo_exact(a, b);
  CHECK(r.value == 1.0);
  CHECK(r.mode == DistanceMode::exact);
  REQUIRE(r.matching);
  CHECK(validate_matching(*r.matching, a, b).valid);
  CHECK(d_defo_exact(a, a).value == 0.0);
  CHECK(d_defo_exact(PersistenceDiagram(g), PersistenceDiagram(g)).value == 0.0);

  const auto px = pd_mobius(vr_filtration(examples::ums_x().space(), 2), 0);
  const auto py = pd_mobius(vr_filtration(examples::ums_y().space(), 2), 0);
  CHECK(d_defo_exact(px, py).value == 0.0);

  PersistenceDiagram big(g);
  big.set(0, 1, 9);
  CHECK_THROWS_AS(d_defo_exact(big, a), CapExceededError);
  CHECK_NOTHROW(d_defo_exact(big, a, 9));
}

TEST_CASE("d_defo_exact agrees with matching enumeration") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 150; ++t) {
    const auto gs = t % 2 ? steps(3 + rng() % 2) : CriticalGrid({0, 0.5, 1.5});
    const auto gt = t % 3 ? steps(3 + rng() % 2) : CriticalGrid({0, 1, 2.5});
    const auto s = random_diagram(rng, gs, 3), u = random_diagram(rng, gt, 3);
    const auto r = d_defo_exact(s, u);
    CHECK(std::abs(r.value - oracle::d_defo_enumerate(s, u)) <= 1e-12);
    REQUIRE(r.matching);
    CHECK(validate_matching(*r.matching, s, u).valid);
    CHECK(std::abs(defcost(*r.matching) - r.value) <= 1e-12);
  }
}

TEST_CASE("bottleneck") {
  const auto g = steps(3);
  const auto a = diagram(g, {{{0, 2}, 1}});
  CHECK(bottleneck(a, a) == 0.0);
  CHECK(bottleneck(a, PersistenceDiagram(g)) == 1.0);
  CHECK(bottleneck(a, diagram(g, {{{0, 1}, 1}})) == 1.0);

  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const auto s = random_diagram(rng, steps(5), 4), u = random_diagram(rng, steps(6, 0.5), 4);
    CHECK(bottleneck(s, u) == doctest::Approx(oracle::bottleneck_enumerate(s, u)).epsilon(1e-12));
    CHECK(bottleneck(s, u) == bottleneck(u, s));
  }
}

TEST_CASE("bottleneck sandwich and triangle inequality") {
  std::mt19937_64 rng(29);
  const auto g = steps(9, 0.5);
  for (int t = 0; t < 200; ++t) {
    // integer endpoints on a half-integer grid, so every bar midpoint is a grid value
    PersistenceDiagram s(g), u(g);
    for (auto* d : {&s, &u}) {
      const std::size_t k = rng() % 6;
      for (std::size_t b = 0; b < k; ++b) {
        std::size_t i = 2 * (rng() % 5), j = 2 * (rng() % 5);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        d->add(i, j, 1);
      }
    }
    const double dd = d_defo_exact(s, u).value, bn = bottleneck(s, u);
    CHECK(bn <= dd + 1e-9);
    CHECK(dd <= 2 * bn + 1e-9);
  }
  for (int t = 0; t < 100; ++t) {
    const auto a = random_diagram(rng, steps(4), 3), b = random_diagram(rng, steps(4), 3),
               c = random_diagram(rng, steps(4), 3);
    CHECK(d_defo_exact(a, c).value <= d_defo_exact(a, b).value + d_defo_exact(b, c).value + 1e-12);
    CHECK(d_defo_exact(a, b).value == d_defo_exact(b, a).value);
  }
}

TEST_CASE("d_defo_inf_weighted examples") {
  const auto wx = weighted_pd(weighted_vr(examples::ums_x()), 0);
  const auto wy = weighted_pd(weighted_vr(examples::ums_y()), 0);
  const auto same = d_defo_inf_weighted(wx, wx);
  CHECK(same.value == 0.0);
  CHECK(same.mode == DistanceMode::exact);
  const auto r = d_defo_inf_weighted(wx, wy);
  CHECK(r.mode == DistanceMode::exact);
  CHECK(r.value > 0.0);
  REQUIRE(r.weighted);
  CHECK(validate_weighted_matching(*r.weighted, wx, wy).valid);
  CHECK(std::abs(defcost_p(*r.weighted, kInfinity) - r.value) <= 1e-12);

  const auto hx = weighted_pd(weighted_vr(examples::hexagon()), 1);
  const auto hy = weighted_pd(weighted_vr(examples::hexagon_with_midpoint()), 1);
  const auto h = d_defo_inf_weighted(hx, hy);
  CHECK(h.mode == DistanceMode::exact);
  CHECK(h.value > 0.0);

  // over the cap: certified upper bound
  const auto capped = d_defo_inf_weighted(hx, hy, 4);
  CHECK(capped.mode == DistanceMode::upper_bound);
  REQUIRE(capped.weighted);
  CHECK(validate_weighted_matching(*capped.weighted, hx, hy).valid);
  CHECK(capped.value == defcost_p(*capped.weighted, kInfinity));
  CHECK(capped.value >= h.value);

  // no weight on [0,0]: no weighted matching at all
  const auto g = steps(2);
  const WeightedPersistenceDiagram off(PersistenceDiagram(g), {{{0, 1}, 1.0}});
  CHECK(std::isinf(d_defo_inf_weighted(off, wx).value));
}

TEST_CASE("d_defo_inf_weighted agrees with support enumeration") {
  std::mt19937_64 rng(41);
  int compared = 0;
  for (int t = 0; t < 60; ++t) {
    const auto s = random_weighted(rng, steps(3), 2);
    const auto u = random_weighted(rng, t % 2 ? steps(3) : CriticalGrid({0, 0.5, 2}), 2);
    if (s.weight().size() * u.weight().size() > 16) continue;
    const auto r = d_defo_inf_weighted(s, u);
    ++compared;
    CHECK(r.mode == DistanceMode::exact);
    CHECK(std::abs(r.value - oracle::d_defo_inf_weighted_enumerate(s, u)) <= 1e-12);
    REQUIRE(r.weighted);
    CHECK(validate_weighted_matching(*r.weighted, s, u).valid);
    // dominance over the unweighted distance and the flipped-GDD lower bound
    CHECK(d_defo_exact(s.diagram(), u.diagram()).value <= r.value + 1e-12);
    CHECK(gw_inf_exact(interval_mm_space(s.grid(), s.weight()), interval_mm_space(u.grid(), u.weight()), 64) <=
          r.value + 1e-9);
  }
  CHECK(compared >= 30);
}

TEST_CASE("d_defo_p_weighted") {
  const auto wx = weighted_pd(weighted_vr(examples::ums_x()), 0);
  const auto self = d_defo_p_weighted(wx, wx, 2.0);
  CHECK(self.mode == DistanceMode::upper_bound);
  CHECK(self.value <= 1e-9);
  REQUIRE(self.weighted);
  CHECK(validate_weighted_matching(*self.weighted, wx, wx).valid);
  CHECK(std::abs(defcost_p(*self.weighted, 2.0) - self.value) <= 1e-12);

  // equal weights, diagrams differing in one bar
  const auto g = steps(4);
  const auto w = flip_measure(g, DiscreteMeasure1D(g.values(), {0.25, 0.25, 0.25, 0.25}));
  const WeightedPersistenceDiagram s0(diagram(g, {{{0, 1}, 1}}), w);
  const WeightedPersistenceDiagram s1(diagram(g, {{{0, 1}, 1}, {{1, 3}, 1}}), w);
  const auto r = d_defo_p_weighted(s0, s1, 2.0);
  CHECK(r.value <= 1e-6);
  REQUIRE(r.weighted);
  CHECK(validate_weighted_matching(*r.weighted, s0, s1).valid);

  const auto bx = weighted_pd(weighted_vr(examples::boutin_kemper_x()), 0);
  const auto by = weighted_pd(weighted_vr(examples::boutin_kemper_y()), 0);
  const auto bk = d_defo_p_weighted(bx, by, 2.0);
  CHECK(std::isfinite(bk.value));
  CHECK(bk.mode == DistanceMode::upper_bound);

  CHECK_THROWS_AS(d_defo_p_weighted(wx, wx, kInfinity), ValidationError);
  CHECK_THROWS_AS(d_defo_p_weighted(wx, wx, 0.5), ValidationError);

  // never above the product coupling it starts from
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_weighted(rng, steps(3), 2), b = random_weighted(rng, steps(3), 2);
    const auto fp = d_defo_p_weighted(a, b, 1.0, {3, static_cast<std::uint64_t>(t), 1e-15});
    REQUIRE(fp.weighted);
    CHECK(validate_weighted_matching(*fp.weighted, a, b).valid);
    WeightedMatching product{fp.weighted->gamma, {}};
    for (const auto& [i, mi] : a.weight())
      for (const auto& [j, mj] : b.weight()) product.eta[{i, j}] = mi * mj;
    CHECK(fp.value <= defcost_p(product, 1.0) + 1e-9);
  }
}
