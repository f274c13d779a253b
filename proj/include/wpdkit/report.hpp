#pragma once

#include <cstddef>
#include <cstdint>

#include "json.hpp"
#include "wpdkit/metric.hpp"
#include "wpdkit/pd_distances.hpp"

namespace wpdkit {

struct CompareOptions {
  int degree = 0;
  double p = kInfinity;
  int max_dim = 2;
  double eps_eq = 1e-9;
  std::size_t exact_cells = kDefaultExactCellCap;
  std::size_t bar_cap = kDefaultBarCap;
  std::size_t weighted_cells = kDefaultWeightedCellCap;
  int restarts = 4;
  std::uint64_t seed = 0;
  bool stability = false;
};

/// Every distance between X and Y and their degree-d diagrams:
///   "distances": d_defo, d_defo_weighted (at p), bottleneck, gh, gw_inf (p = inf) or
///                gw_p (p finite, upper bound), wasserstein_gdd (at p);
///   "edit_distances": edit_gh = 2 gh and edit_gw = 2 gw at p, each with its factor;
///   "stability": the stability report when requested.
/// Throws CapExceededError when an exact solver is over its cap.
nlohmann::ordered_json compare_report(const MMSpace& x, const MMSpace& y, const CompareOptions& options);

}  // namespace wpdkit
