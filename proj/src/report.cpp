#include "wpdkit/report.hpp"

#include <algorithm>

#include "wpdkit/diagram.hpp"
#include "wpdkit/filtration.hpp"
#include "wpdkit/io.hpp"
#include "wpdkit/stability.hpp"

namespace wpdkit {

using nlohmann::ordered_json;

namespace {

ordered_json edit_entry(const std::string& metric, const std::string& of, double p, double value, DistanceMode mode) {
  ordered_json e;
  e["metric"] = metric;
  e["of"] = of;
  e["p"] = io::number(p);
  e["factor"] = 2;
  e["value"] = io::number(2.0 * value);
  e["mode"] = to_string(mode);
  return e;
}

}  // namespace

ordered_json compare_report(const MMSpace& x, const MMSpace& y, const CompareOptions& options) {
  if (options.degree < 0) throw ValidationError("degree must be nonnegative");
  if (!(options.p >= 1.0)) throw ValidationError("p must lie in [1, inf]");
  const int max_dim = std::max(options.max_dim, options.degree + 1);
  const auto wx = weighted_pd(weighted_vr(x, max_dim, options.eps_eq), options.degree);
  const auto wy = weighted_pd(weighted_vr(y, max_dim, options.eps_eq), options.degree);
  const double p = options.p;

  ordered_json distances = ordered_json::array();
  distances.push_back(io::distance_json("d_defo", kInfinity, d_defo_exact(wx.diagram(), wy.diagram(), options.bar_cap)));
  if (is_infinite_p(p)) {
    distances.push_back(io::distance_json("d_defo_weighted", p, d_defo_inf_weighted(wx, wy, options.weighted_cells)));
  } else {
    FinitePOptions fp;
    fp.restarts = options.restarts;
    fp.seed = options.seed;
    distances.push_back(io::distance_json("d_defo_weighted", p, d_defo_p_weighted(wx, wy, p, fp)));
  }
  distances.push_back(
      io::distance_json("bottleneck", kInfinity, bottleneck(wx.diagram(), wy.diagram()), DistanceMode::exact));

  const double gh = gh_exact(x.space(), y.space(), options.exact_cells);
  distances.push_back(io::distance_json("gh", kInfinity, gh, DistanceMode::exact));
  double gw = 0.0;
  DistanceMode gw_mode = DistanceMode::exact;
  if (is_infinite_p(p)) {
    gw = gw_inf_exact(x, y, options.exact_cells);
    distances.push_back(io::distance_json("gw_inf", p, gw, gw_mode));
  } else {
    const auto up = gw_p_upper(x, y, p, options.restarts, options.seed);
    gw = up.value;
    gw_mode = DistanceMode::upper_bound;
    distances.push_back(io::distance_json("gw_p", p, gw, gw_mode, up.coupling.data()));
  }
  distances.push_back(io::distance_json("wasserstein_gdd", p,
                                        wasserstein_1d(gdd(x, options.eps_eq), gdd(y, options.eps_eq), p),
                                        DistanceMode::exact));

  ordered_json out;
  out["degree"] = options.degree;
  out["p"] = io::number(p);
  out["sizes"] = {x.size(), y.size()};
  out["distances"] = std::move(distances);
  out["edit_distances"] = {edit_entry("edit_gh", "gh", kInfinity, gh, DistanceMode::exact),
                           edit_entry("edit_gw", is_infinite_p(p) ? "gw_inf" : "gw_p", p, gw, gw_mode)};
  if (options.stability) {
    StabilityOptions so;
    so.max_dim = max_dim;
    so.eps_eq = options.eps_eq;
    so.exact_cells = options.exact_cells;
    so.bar_cap = options.bar_cap;
    so.weighted_cells = options.weighted_cells;
    so.restarts = options.restarts;
    so.seed = options.seed;
    out["stability"] = io::to_json(stability_report(x, y, options.degree, p, so));
  }
  return out;
}

}  // namespace wpdkit
