#include "wpdkit/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wpdkit/diagram.hpp"
#include "wpdkit/examples.hpp"
#include "wpdkit/filtration.hpp"
#include "wpdkit/homology.hpp"
#include "wpdkit/pd_distances.hpp"
#include "wpdkit/report.hpp"
#include "wpdkit/stability.hpp"

namespace wpdkit::verify {

namespace {

template <typename... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  os.precision(12);
  (os << ... << args);
  return os.str();
}

CheckResult check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

FiniteMetricSpace random_planar(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts(n, std::vector<double>(2));
  for (auto& p : pts) p = {u(rng), u(rng)};
  return euclidean_space(pts);
}

PersistenceDiagram pd(const MMSpace& x, int degree) { return pd_mobius(vr_filtration(x.space(), 2), degree); }
WeightedPersistenceDiagram wpd(const MMSpace& x, int degree) { return weighted_pd(weighted_vr(x), degree); }

bool gdd_is(const DiscreteMeasure1D& g, const std::vector<double>& support, const std::vector<double>& mass) {
  if (g.size() != support.size()) return false;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.support()[i] - support[i]) > 1e-12 || std::abs(g.mass()[i] - mass[i]) > 1e-12) return false;
  return true;
}

std::string gdd_text(const DiscreteMeasure1D& g) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < g.size(); ++i) os << (i ? ", " : "") << g.support()[i] << ":" << g.mass()[i];
  os << "}";
  return os.str();
}

std::vector<std::pair<double, double>> flip_support(const WeightedPersistenceDiagram& w) {
  std::vector<std::pair<double, double>> out;
  for (const auto& [iv, mass] : w.weight()) out.emplace_back(w.grid()[iv.first], w.grid()[iv.second]);
  return out;
}

bool same_points(const std::vector<std::pair<double, double>>& a, const std::vector<std::pair<double, double>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i].first - b[i].first) > 1e-9 || std::abs(a[i].second - b[i].second) > 1e-9) return false;
  return true;
}

CheckResult all_of(std::string name, const std::vector<CheckResult>& parts) {
  CheckResult r{std::move(name), true, ""};
  for (const auto& p : parts) {
    r.passed = r.passed && p.passed;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += (p.passed ? "" : "FAILED ") + p.name + " (" + p.detail + ")";
  }
  return r;
}

// ---------------------------------------------------------------------------

CheckResult mobius_vs_reduction(std::mt19937_64& rng) {
  std::size_t mismatches = 0, bars = 0;
  for (int t = 0; t < 100; ++t) {
    const auto f = vr_filtration(random_planar(rng, 4 + rng() % 4), 2);
    for (int d = 0; d <= 1; ++d) {
      const auto a = pd_mobius(f, d).off_diagonal();
      mismatches += a != pd_reduction_oracle(f, d).off_diagonal();
      for (const auto& [iv, k] : a) bars += static_cast<std::size_t>(k);
    }
  }
  return check("mobius equals reduction", mismatches == 0,
               cat("100 spaces x 2 degrees, ", mismatches, " mismatches, ", bars, " bars compared"));
}

CheckResult bottleneck_sandwich(std::mt19937_64& rng) {
  std::vector<double> half;
  for (int i = 0; i <= 8; ++i) half.push_back(0.5 * i);
  const CriticalGrid grid(half);
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (int t = 0; t < 200; ++t) {
    PersistenceDiagram s(grid), u(grid);
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
    if (bn > dd + 1e-9 || dd > 2 * bn + 1e-9) ++violations;
    if (bn > 0) worst_ratio = std::max(worst_ratio, dd / bn);
  }
  return check("bottleneck sandwich", violations == 0,
               cat("200 pairs, ", violations, " violations, max d_defo/bottleneck ", worst_ratio));
}

CheckResult stability_monte_carlo(std::mt19937_64& rng) {
  std::size_t checks = 0, holds = 0, violated = 0, flipped_exact = 0;
  double worst_slack = kInfinity;
  for (int t = 0; t < 50; ++t) {
    const auto x = MMSpace::uniform(random_planar(rng, 3 + rng() % 2));
    const auto y = MMSpace::uniform(random_planar(rng, 3 + rng() % 2));
    for (int d = 0; d <= 1; ++d) {
      const auto rep = stability_report(x, y, d, kInfinity);
      for (const auto& c : rep.checks) {
        ++checks;
        holds += c.verdict == Verdict::holds;
        violated += c.verdict == Verdict::violated;
        if (c.name == "flipped") flipped_exact += c.lhs.exact();
        worst_slack = std::min(worst_slack, c.rhs.lower - c.lhs.upper);
      }
    }
  }
  return check("stability p=inf", holds == checks,
               cat("50 pairs x 2 degrees, ", checks, " inequalities, ", holds, " hold, ", violated,
                   " violated; flipped-GDD GW_inf exact in ", flipped_exact, " of 100, certificate bound otherwise; "
                   "min slack ",
                   worst_slack));
}

CheckResult finite_p_insensitivity() {
  const auto w = wpd(examples::ums_x(), 0);
  const PersistenceDiagram& s0 = w.diagram();
  PersistenceDiagram s1 = s0;
  s1.add(1, 2, 1);
  const WeightedPersistenceDiagram a(s0, w.weight()), b(s1, w.weight());
  const auto r = d_defo_p_weighted(a, b, 2.0);
  return check("finite-p insensitivity", r.value <= 1e-6 && r.weighted.has_value(),
               cat("p = 2, one extra bar [1,2], value ", r.value, " (", to_string(r.mode), ")"));
}

CheckResult round_trips(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + rng() % 8;
    std::vector<double> v(k), mass(k);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    double at = 0.0, total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      v[i] = at;
      at += u(rng);
      total += (mass[i] = u(rng));
    }
    for (double& m : mass) m /= total;
    const CriticalGrid grid(v);
    const DiscreteMeasure1D mu(v, mass, 1e-9);
    const auto back = recover_gdd(grid, flip_measure(grid, mu));
    if (back.size() != k) {
      worst = kInfinity;
      continue;
    }
    for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, std::abs(back.mass()[i] - mu.mass()[i]));
  }
  std::size_t mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v;
    for (std::size_t i = 0, k = 1 + rng() % 7; i < k; ++i) v.push_back(static_cast<double>(i));
    const auto poset = interval_poset(CriticalGrid(v));
    std::vector<long long> m(poset.size());
    for (auto& e : m) e = static_cast<long long>(rng() % 41) - 20;
    const auto dm = mobius_invert(poset, m);
    for (std::size_t q = 0; q < poset.size(); ++q) {
      long long sum = 0;
      for (std::size_t r = 0; r < poset.size(); ++r)
        if (poset.leq(r, q)) sum += dm[r];
      mismatches += sum != m[q];
    }
  }
  return check("round trips", worst <= 1e-12 && mismatches == 0,
               cat("flip/unflip max error ", worst, " over 100 measures; Mobius re-summation ", mismatches,
                   " mismatches over 100 functions"));
}

CheckResult edit_factors() {
  std::vector<CheckResult> parts;
  for (double p : {kInfinity, 2.0}) {
    CompareOptions opt;
    opt.p = p;
    const auto rep = compare_report(examples::ums_x(), examples::ums_y(), opt);
    const auto find = [](const nlohmann::ordered_json& list, const std::string& metric) {
      for (const auto& e : list)
        if (e["metric"] == metric) return e;
      return nlohmann::ordered_json();
    };
    const std::string gw_name = std::isinf(p) ? "gw_inf" : "gw_p";
    const auto gh = find(rep["distances"], "gh"), gw = find(rep["distances"], gw_name);
    const auto egh = find(rep["edit_distances"], "edit_gh"), egw = find(rep["edit_distances"], "edit_gw");
    const bool ok = !gh.is_null() && !gw.is_null() && !egh.is_null() && !egw.is_null() && egh["of"] == "gh" &&
                    egh["factor"] == 2 && egh["value"].get<double>() == 2.0 * gh["value"].get<double>() &&
                    egw["of"] == gw_name && egw["factor"] == 2 &&
                    egw["value"].get<double>() == 2.0 * gw["value"].get<double>() && egw["mode"] == gw["mode"];
    parts.push_back(check(cat("p = ", p), ok,
                          ok ? cat("edit_gh ", egh["value"].get<double>(), " = 2 x ", gh["value"].get<double>(),
                                   ", edit_gw ", egw["value"].get<double>(), " = 2 x ", gw["value"].get<double>())
                             : "labels or factors missing"));
  }
  return all_of("edit-distance factors", parts);
}

}  // namespace

std::vector<CheckResult> example(const std::string& name) {
  std::vector<CheckResult> out;
  if (name == "ums") {
    const auto x = examples::ums_x(), y = examples::ums_y();
    for (int d = 0; d <= 1; ++d) out.push_back(check(cat("PD_", d, " equal"), same_bars(pd(x, d), pd(y, d)), "exact"));
    const auto gx = gdd(x), gy = gdd(y);
    out.push_back(check("GDD X", gdd_is(gx, {0, 1, 2}, {0.25, 0.25, 0.5}), gdd_text(gx)));
    out.push_back(check("GDD Y", gdd_is(gy, {0, 1, 2}, {0.25, 0.375, 0.375}), gdd_text(gy)));
    const auto wx = wpd(x, 0), wy = wpd(y, 0);
    out.push_back(check("weights differ", wx.weight() != wy.weight(), cat(wx.weight().size(), " weighted intervals")));
    const auto r = d_defo_inf_weighted(wx, wy);
    out.push_back(check("d_defo_inf(wPD_0) > 0", r.value > 0.0, cat(r.value, " (", to_string(r.mode), ")")));
    const double w1 = wasserstein_1d(gx, gy, 1.0);
    out.push_back(check("W_1(GDD) = 0.125", std::abs(w1 - 0.125) <= 1e-12, cat(w1)));
  } else if (name == "boutin-kemper") {
    const auto x = examples::boutin_kemper_x(), y = examples::boutin_kemper_y();
    const auto sorted = [](const MMSpace& s) {
      std::vector<double> v;
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) v.push_back(s.space()(i, j));
      std::sort(v.begin(), v.end());
      return v;
    };
    const auto dx = sorted(x), dy = sorted(y);
    double gap = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) gap = std::max(gap, std::abs(dx[i] - dy[i]));
    out.push_back(check("distance multisets agree", dx.size() == dy.size() && gap <= 1e-9, cat("max gap ", gap)));
    const double w1 = wasserstein_1d(gdd(x), gdd(y), 1.0);
    out.push_back(check("W_1(GDD) = 0", std::abs(w1) <= 1e-9, cat(w1)));
    const auto px = pd(x, 0), py = pd(y, 0);
    out.push_back(check("PD_0 differ", !same_bars(px, py), cat(px.bar_count(), " vs ", py.bar_count(), " bars")));
    const auto r = d_defo_exact(px, py);
    out.push_back(check("d_defo(PD_0) > 0", r.value > 0.0, cat(r.value)));
  } else if (name == "hexagon") {
    const auto x = examples::hexagon(), y = examples::hexagon_with_midpoint();
    const auto px = pd(x, 1), py = pd(y, 1);
    out.push_back(check("PD_1 equal", same_bars(px, py), cat(px.bar_count(), " bar(s)")));
    const auto wx = wpd(x, 1), wy = wpd(y, 1);
    const auto fx = flip_support(wx), fy = flip_support(wy);
    out.push_back(check("flip supports differ", !same_points(fx, fy), cat(fx.size(), " vs ", fy.size(), " intervals")));
    const auto r = d_defo_inf_weighted(wx, wy);
    out.push_back(check("d_defo_inf(wPD_1) > 0", r.value > 0.0, cat(r.value, " (", to_string(r.mode), ")")));
  } else {
    examples::by_name(name);  // throws for unknown names
  }
  return out;
}

CheckResult criterion(int k, const Options& options) {
  std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(k));
  CheckResult r;
  switch (k) {
    case 1:
      r = mobius_vs_reduction(rng);
      break;
    case 2:
      r = all_of("ums reproduction", example("ums"));
      break;
    case 3:
      r = all_of("Boutin-Kemper reproduction", example("boutin-kemper"));
      break;
    case 4:
      r = all_of("hexagon reproduction", example("hexagon"));
      break;
    case 5:
      r = bottleneck_sandwich(rng);
      break;
    case 6:
      r = stability_monte_carlo(rng);
      break;
    case 7:
      r = finite_p_insensitivity();
      break;
    case 8:
      r = round_trips(rng);
      break;
    case 9:
      r = edit_factors();
      break;
    default:
      throw ValidationError(cat("no acceptance criterion ", k));
  }
  r.name = cat(k, ". ", r.name);
  return r;
}

std::vector<CheckResult> acceptance(const Options& options) {
  std::vector<CheckResult> out;
  for (int k = 1; k <= 9; ++k) {
    try {
      out.push_back(criterion(k, options));
    } catch (const std::exception& e) {
      out.push_back({cat(k, ". criterion ", k), false, cat("error: ", e.what())});
    }
  }
  return out;
}

}  // namespace wpdkit::verify
