#include "wpdkit/stability.hpp"

#include <algorithm>
#include <cmath>

#include "wpdkit/diagram.hpp"
#include "wpdkit/filtration.hpp"

namespace wpdkit {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "HOLDS";
    case Verdict::holds_vacuously:
      return "HOLDS-VACUOUSLY";
    case Verdict::violated:
      return "VIOLATED";
  }
  return "?";
}

Verdict judge(const Bound& lhs, const Bound& rhs, double tol) {
  if (lhs.upper <= rhs.lower + tol) return Verdict::holds;
  if (lhs.lower > rhs.upper + tol) return Verdict::violated;
  return Verdict::holds_vacuously;
}

bool StabilityReport::violated() const {
  return std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.verdict == Verdict::violated; });
}

namespace {

InequalityCheck make_check(std::string name, std::string lhs_label, Bound lhs, std::string rhs_label, Bound rhs) {
  InequalityCheck c{std::move(name), std::move(lhs_label), std::move(rhs_label), lhs, rhs, Verdict::holds};
  c.verdict = judge(lhs, rhs);
  return c;
}

Bound scaled(Bound b, double k) { return {k * b.lower, k * b.upper}; }

// The coupling of a weighted matching read as a coupling of the two flipped-GDD spaces.
Coupling certificate_coupling(const WeightedMatching& w, const WeightedPersistenceDiagram& s,
                              const WeightedPersistenceDiagram& t, const MMSpace& fs, const MMSpace& ft) {
  std::map<IntervalIndex, std::size_t> row, col;
  for (const auto& [iv, mass] : s.weight()) row.emplace(iv, row.size());
  for (const auto& [iv, mass] : t.weight()) col.emplace(iv, col.size());
  std::vector<double> plan(row.size() * col.size(), 0.0);
  for (const auto& [c, mass] : w.eta) plan[row.at(c.first) * col.size() + col.at(c.second)] += mass;
  return Coupling(row.size(), col.size(), std::move(plan), fs.mu(), ft.mu(), 1e-9);
}

}  // namespace

StabilityReport stability_report(const MMSpace& x, const MMSpace& y, int degree, double p,
                                 const StabilityOptions& options) {
  if (degree < 0) throw ValidationError("degree must be nonnegative");
  if (!(p >= 1.0)) throw ValidationError("p must lie in [1, inf]");
  const int max_dim = std::max(options.max_dim, degree + 1);
  const auto wx = weighted_pd(weighted_vr(x, max_dim, options.eps_eq), degree);
  const auto wy = weighted_pd(weighted_vr(y, max_dim, options.eps_eq), degree);

  StabilityReport rep;
  rep.degree = degree;
  rep.p = p;

  const double unweighted = d_defo_exact(wx.diagram(), wy.diagram(), options.bar_cap).value;
  const double gh = gh_exact(x.space(), y.space(), options.exact_cells);
  rep.checks.push_back(make_check("unweighted", "d_defo(PD X, PD Y)", Bound::point(unweighted), "4 d_GH(X, Y)",
                                  Bound::point(4.0 * gh)));

  if (is_infinite_p(p)) {
    const auto weighted = d_defo_inf_weighted(wx, wy, options.weighted_cells);
    const Bound wbound = weighted.mode == DistanceMode::exact ? Bound::point(weighted.value)
                                                              : Bound{unweighted, weighted.value};
    const double gw = gw_inf_exact(x, y, options.exact_cells);
    rep.checks.push_back(make_check("weighted", "d_defo_inf(wPD X, wPD Y)", wbound, "4 d_GW_inf(X, Y)",
                                    Bound::point(4.0 * gw)));

    const auto fx = interval_mm_space(wx.grid(), wx.weight());
    const auto fy = interval_mm_space(wy.grid(), wy.weight());
    Bound flipped;
    if (fx.size() * fy.size() <= options.flipped_exact_cells) {
      flipped = Bound::point(gw_inf_exact(fx, fy, options.flipped_exact_cells));
    } else {
      // The certificate coupling distorts the interval metric by at most its displacement cost.
      const auto coupling = certificate_coupling(*weighted.weighted, wx, wy, fx, fy);
      flipped = {0.0, 0.5 * p_distortion(coupling, fx, fy, kInfinity)};
    }
    rep.checks.push_back(make_check("flipped", "d_GW_inf(flipped GDD X, flipped GDD Y)", flipped,
                                    "d_defo_inf(wPD X, wPD Y)", wbound));
  } else {
    FinitePOptions fp;
    fp.restarts = options.restarts;
    fp.seed = options.seed;
    const auto weighted = d_defo_p_weighted(wx, wy, p, fp);
    const double factor = std::pow(4.0, (p + 1.0) / p);
    const double flb = 0.5 * wasserstein_1d(gdd(x, options.eps_eq), gdd(y, options.eps_eq), p);
    const double gw = gw_p_upper(x, y, p, options.restarts, options.seed).value;
    rep.checks.push_back(make_check("weighted", "d_defo_p(wPD X, wPD Y)", {0.0, weighted.value},
                                    "4^((p+1)/p) d_GW_p(X, Y)", scaled({std::min(flb, gw), gw}, factor)));
  }
  return rep;
}

}  // namespace wpdkit
