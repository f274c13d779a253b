#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wpdkit/metric.hpp"
#include "wpdkit/pd_distances.hpp"

namespace wpdkit {

/// A quantity known to lie in [lower, upper]; exact when the two agree.
struct Bound {
  double lower = 0.0;
  double upper = 0.0;
  bool exact() const noexcept { return lower == upper; }
  static Bound point(double v) { return {v, v}; }
};

enum class Verdict { holds, holds_vacuously, violated };
std::string to_string(Verdict v);

/// lhs <= rhs: holds if certain from the bounds, violated if certainly false.
Verdict judge(const Bound& lhs, const Bound& rhs, double tol = 1e-9);

struct InequalityCheck {
  std::string name;
  std::string lhs_label;
  std::string rhs_label;
  Bound lhs;
  Bound rhs;
  Verdict verdict = Verdict::holds;
};

struct StabilityReport {
  int degree = 0;
  double p = kInfinity;
  std::vector<InequalityCheck> checks;
  bool violated() const;
};

struct StabilityOptions {
  int max_dim = 2;
  double eps_eq = 1e-9;
  std::size_t exact_cells = kDefaultExactCellCap;       // GH and GW_inf on the input spaces
  std::size_t bar_cap = kDefaultBarCap;                 // unweighted displacement distance
  std::size_t weighted_cells = kDefaultWeightedCellCap;  // weighted p = inf displacement distance
  std::size_t flipped_exact_cells = 100;                // GW_inf between the flipped-GDD spaces
  int restarts = 4;
  std::uint64_t seed = 0;
};

/// Stability inequalities between the degree-d diagrams of X and Y:
///   d_defo(PD X, PD Y) <= 4 d_GH(X, Y) for every p, and
///   p = inf:  d_GW_inf(flipped GDDs) <= d_defo_inf(wPD X, wPD Y) <= 4 d_GW_inf(X, Y),
///   p < inf:  d_defo_p(wPD X, wPD Y) <= 4^((p+1)/p) d_GW_p(X, Y).
/// Throws CapExceededError when an exact solver needed for a right-hand side is over its cap.
StabilityReport stability_report(const MMSpace& x, const MMSpace& y, int degree, double p,
                                 const StabilityOptions& options = {});

}  // namespace wpdkit
