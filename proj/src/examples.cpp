#include "wpdkit/examples.hpp"

#include <cmath>
#include <numbers>

namespace wpdkit::examples {

MMSpace ums_x() {
  return MMSpace::uniform(validate_pseudo_metric({{0, 1, 2, 2}, {1, 0, 2, 2}, {2, 2, 0, 1}, {2, 2, 1, 0}}));
}

MMSpace ums_y() {
  return MMSpace::uniform(validate_pseudo_metric({{0, 1, 1, 2}, {1, 0, 1, 2}, {1, 1, 0, 2}, {2, 2, 2, 0}}));
}

namespace {

std::vector<std::vector<double>> hexagon_points() {
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 6; ++k) {
    const double a = k * std::numbers::pi / 3.0;
    pts.push_back({std::cos(a), std::sin(a)});
  }
  return pts;
}

}  // namespace

MMSpace hexagon() { return MMSpace::uniform(euclidean_space(hexagon_points())); }

MMSpace hexagon_with_midpoint() {
  auto pts = hexagon_points();
  pts.push_back({(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0});
  return MMSpace::uniform(euclidean_space(pts));
}

MMSpace boutin_kemper_x() { return MMSpace::uniform(euclidean_space({{0, 0}, {1, 1}, {3, 1}, {4, 0}})); }

MMSpace boutin_kemper_y() { return MMSpace::uniform(euclidean_space({{0, 0}, {3, 1}, {3, -1}, {4, 0}})); }

std::vector<std::string> names() { return {"ums", "hexagon", "boutin-kemper"}; }

ExamplePair by_name(const std::string& name) {
  if (name == "ums") return {name, ums_x(), ums_y()};
  if (name == "hexagon") return {name, hexagon(), hexagon_with_midpoint()};
  if (name == "boutin-kemper") return {name, boutin_kemper_x(), boutin_kemper_y()};
  throw ValidationError("unknown example '" + name + "' (known: ums, hexagon, boutin-kemper)");
}

}  // namespace wpdkit::examples
