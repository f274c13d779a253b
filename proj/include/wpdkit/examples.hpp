#pragma once

#include <string>
#include <vector>

#include "wpdkit/metric.hpp"

namespace wpdkit::examples {

/// Two ultrametric four-point spaces with equal diagrams but different distance distributions.
MMSpace ums_x();
MMSpace ums_y();

/// Regular hexagon of circumradius 1, and the same hexagon with the midpoint of one side added.
MMSpace hexagon();
MMSpace hexagon_with_midpoint();

/// Four planar points each; equal distance multisets, different diagrams.
MMSpace boutin_kemper_x();
MMSpace boutin_kemper_y();

struct ExamplePair {
  std::string name;
  MMSpace x;
  MMSpace y;
};

std::vector<std::string> names();
/// Throws ValidationError for unknown names.
ExamplePair by_name(const std::string& name);

}  // namespace wpdkit::examples
