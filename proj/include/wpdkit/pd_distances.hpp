#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wpdkit/diagram.hpp"

namespace wpdkit {

struct Interval {
  double birth = 0.0;
  double death = 0.0;
};

/// Displacement of the pair (I1, I2) onto (J1, J2).
double defo(const Interval& i1, const Interval& i2, const Interval& j1, const Interval& j2);

/// A cell of Q-bar x R-bar: source interval on Q, target interval on R (grid indices).
using MatchingCell = std::pair<IntervalIndex, IntervalIndex>;

/// Integer transport plan between two diagrams.
struct Matching {
  CriticalGrid source_grid;
  CriticalGrid target_grid;
  std::map<MatchingCell, long long> cells;  // positive entries only
};

/// A matching together with a coupling of the two diagram weights.
struct WeightedMatching {
  Matching gamma;
  std::map<MatchingCell, double> eta;  // positive entries only
};

struct MatchingReport {
  bool valid = true;
  std::vector<std::string> problems;
};

MatchingReport validate_matching(const Matching& g, const PersistenceDiagram& s, const PersistenceDiagram& t);
/// Also checks that eta couples the two weights and that gamma > 0 implies eta > 0.
MatchingReport validate_weighted_matching(const WeightedMatching& w, const WeightedPersistenceDiagram& s,
                                          const WeightedPersistenceDiagram& t, double eps_mass = 1e-9);

/// Max displacement over pairs of cells with positive gamma.
double defcost(const Matching& g);
/// (sum defo^p eta(x) eta(y))^(1/p); for p = inf the max over pairs of cells with positive eta.
double defcost_p(const WeightedMatching& w, double p);

enum class DistanceMode { exact, upper_bound };
std::string to_string(DistanceMode mode);

struct DistanceResult {
  double value = 0.0;
  DistanceMode mode = DistanceMode::exact;
  std::optional<Matching> matching;
  std::optional<WeightedMatching> weighted;
};

inline constexpr std::size_t kDefaultBarCap = 8;
inline constexpr std::size_t kDefaultWeightedCellCap = 4096;

/// Least displacement cost over all matchings. Throws CapExceededError when a
/// diagram has more than `bar_cap` bars (counted with multiplicity).
DistanceResult d_defo_exact(const PersistenceDiagram& s, const PersistenceDiagram& t,
                            std::size_t bar_cap = kDefaultBarCap);

/// Classical bottleneck distance (l-infinity ground cost, diagonal at half length).
double bottleneck(const PersistenceDiagram& s, const PersistenceDiagram& t);

/// Weighted p = inf displacement distance. Exact when the number of weighted cells
/// is at most `cell_cap`; otherwise an upper bound attained by the returned certificate.
DistanceResult d_defo_inf_weighted(const WeightedPersistenceDiagram& s, const WeightedPersistenceDiagram& t,
                                   std::size_t cell_cap = kDefaultWeightedCellCap);

struct FinitePOptions {
  int restarts = 4;
  std::uint64_t seed = 0;
  double eps_supp = 1e-15;  // mass mixed in from the product coupling
};

/// Upper bound on the finite-p weighted displacement distance.
DistanceResult d_defo_p_weighted(const WeightedPersistenceDiagram& s, const WeightedPersistenceDiagram& t, double p,
                                 const FinitePOptions& options = {});

}  // namespace wpdkit
