#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "wpdkit/filtration.hpp"
#include "wpdkit/metric.hpp"

namespace wpdkit {

/// Grid-index pair (i, j), i <= j, standing for the interval [q_i, q_j].
using IntervalIndex = std::pair<std::size_t, std::size_t>;

/// The staircase {[q_i, q_j] : i <= j} with the product order. Intervals are listed
/// lexicographically, which is a linear extension of the product order.
class IntervalPoset {
 public:
  explicit IntervalPoset(CriticalGrid grid);

  const CriticalGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  const IntervalIndex& operator[](std::size_t k) const { return intervals_[k]; }
  const std::vector<IntervalIndex>& intervals() const noexcept { return intervals_; }
  std::size_t index(std::size_t i, std::size_t j) const;
  std::size_t index(const IntervalIndex& iv) const { return index(iv.first, iv.second); }

  /// Product order: [a,b] <= [c,d] iff a <= c and b <= d.
  bool leq(std::size_t p, std::size_t q) const;
  /// l-infinity distance between the intervals as points of the plane.
  double distance(std::size_t p, std::size_t q) const;

 private:
  CriticalGrid grid_;
  std::vector<IntervalIndex> intervals_;
};

IntervalPoset interval_poset(const CriticalGrid& grid);

/// The unique dm with m(p) = sum_{p' <= p} dm(p'); functions are indexed like P.
std::vector<long long> mobius_invert(const IntervalPoset& p, const std::vector<long long>& m);

struct Bar {
  double birth = 0.0;
  double death = 0.0;
  long long multiplicity = 0;
};

/// Multiplicity function on the intervals of a grid (sparse; zero entries omitted).
/// Diagonal entries may be present; bars() reports off-diagonal ones only.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  explicit PersistenceDiagram(CriticalGrid grid, int degree = 0);

  const CriticalGrid& grid() const noexcept { return grid_; }
  int degree() const noexcept { return degree_; }

  /// Throws ValidationError for negative multiplicities or indices off the staircase.
  void set(std::size_t i, std::size_t j, long long multiplicity);
  void add(std::size_t i, std::size_t j, long long multiplicity);
  long long multiplicity(std::size_t i, std::size_t j) const;
  /// All nonzero entries, diagonal included.
  const std::map<IntervalIndex, long long>& entries() const noexcept { return entries_; }

  /// Off-diagonal entries in (birth, death) order.
  std::vector<Bar> bars() const;
  std::map<IntervalIndex, long long> off_diagonal() const;
  long long bar_count() const;

  /// Same diagram re-indexed on another grid containing all of its endpoints.
  PersistenceDiagram remap(const CriticalGrid& grid) const;

 private:
  CriticalGrid grid_;
  int degree_ = 0;
  std::map<IntervalIndex, long long> entries_;
};

/// Off-diagonal equality after moving both diagrams to their merged grid.
bool same_bars(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// Probability measure on the intervals of a grid (sparse; zero entries omitted).
using IntervalMeasure = std::map<IntervalIndex, double>;

class WeightedPersistenceDiagram {
 public:
  WeightedPersistenceDiagram() = default;
  /// Checks that the weight is a probability measure on the staircase and that every
  /// off-diagonal bar carries positive weight.
  WeightedPersistenceDiagram(PersistenceDiagram diagram, IntervalMeasure weight, double eps_mass = 1e-12);

  const PersistenceDiagram& diagram() const noexcept { return diagram_; }
  const IntervalMeasure& weight() const noexcept { return weight_; }
  const CriticalGrid& grid() const noexcept { return diagram_.grid(); }
  double weight(std::size_t i, std::size_t j) const;

 private:
  PersistenceDiagram diagram_;
  IntervalMeasure weight_;
};

/// Moebius inverse of the birth-death function.
PersistenceDiagram pd_mobius(const VRFiltration& f, int degree);

/// Pushforward of mu (x) mu under (q1, q2) -> [min, max]; mu must live on the grid.
IntervalMeasure flip_measure(const CriticalGrid& grid, const DiscreteMeasure1D& mu);

WeightedPersistenceDiagram weighted_pd(const WeightedVRFiltration& wf, int degree);

/// Inverse of flip_measure; throws ValidationError("not a flip measure") when the
/// symmetrized weight is not a product measure (entrywise within 1e-9).
DiscreteMeasure1D recover_gdd(const WeightedPersistenceDiagram& wpd);
DiscreteMeasure1D recover_gdd(const CriticalGrid& grid, const IntervalMeasure& weight);

/// The intervals carrying weight, with the l-infinity metric and the weight as measure.
MMSpace interval_mm_space(const CriticalGrid& grid, const IntervalMeasure& weight);

}  // namespace wpdkit
