#pragma once

#include <cstddef>
#include <vector>

#include "wpdkit/metric.hpp"

namespace wpdkit {

using Simplex = std::vector<std::size_t>;  // vertex indices, ascending

/// Sorted distinct scale values q_0 = 0 < q_1 < ... < q_{k-1}.
class CriticalGrid {
 public:
  CriticalGrid() : values_{0.0} {}
  /// Groups values closer than eps_eq to the smallest member of their group; 0 is always added.
  CriticalGrid(std::vector<double> values, double eps_eq = 1e-9);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }
  double eps_eq() const noexcept { return eps_; }

  /// Index of the group containing `value`; throws ValidationError if none does.
  std::size_t index_of(double value) const;
  bool contains(double value) const;

 private:
  std::vector<double> values_;
  double eps_ = 1e-9;
};

/// Union of two grids, grouped with the larger tolerance.
CriticalGrid merge_grids(const CriticalGrid& a, const CriticalGrid& b);

class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  explicit SimplicialComplex(std::size_t vertex_count) : vertex_count_(vertex_count) {}

  /// Inserts the simplex and all of its faces.
  void insert_closed(Simplex s);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  int dimension() const noexcept { return static_cast<int>(by_dim_.size()) - 1; }
  /// d-simplices in lexicographic order (empty if d exceeds the dimension).
  const std::vector<Simplex>& simplices(int d) const;
  std::size_t size() const;
  bool contains(const Simplex& s) const;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<std::vector<Simplex>> by_dim_;
};

struct FilteredSimplex {
  Simplex vertices;
  double diameter = 0.0;
  std::size_t grid_index = 0;
};

/// Vietoris-Rips filtration over the critical grid. Simplices of each dimension are
/// sorted by (grid index, vertices), so F(q_i) is a prefix of every dimension.
class VRFiltration {
 public:
  VRFiltration() = default;
  VRFiltration(FiniteMetricSpace space, CriticalGrid grid, int max_dim, std::vector<std::vector<FilteredSimplex>> simplices);

  const FiniteMetricSpace& space() const noexcept { return space_; }
  const CriticalGrid& grid() const noexcept { return grid_; }
  int max_dim() const noexcept { return max_dim_; }

  /// d-simplices in filtration order (empty if d > max_dim).
  const std::vector<FilteredSimplex>& simplices(int d) const;
  /// Number of d-simplices present in F(q_i).
  std::size_t count(int d, std::size_t i) const;
  /// Position of a d-simplex in simplices(d); throws if absent.
  std::size_t index_of(const Simplex& s) const;
  SimplicialComplex complex_at(std::size_t i) const;

 private:
  FiniteMetricSpace space_;
  CriticalGrid grid_;
  int max_dim_ = 0;
  std::vector<std::vector<FilteredSimplex>> simplices_;
  std::vector<std::vector<std::size_t>> prefix_;  // prefix_[d][i] = count(d, i)
};

struct WeightedVRFiltration {
  VRFiltration filtration;
  DiscreteMeasure1D grid_weights;
};

inline constexpr int kDefaultMaxDim = 2;

CriticalGrid critical_grid(const FiniteMetricSpace& x, double eps_eq = 1e-9);

/// Largest pairwise distance among the vertices (0 for a vertex).
double diameter(const FiniteMetricSpace& x, const Simplex& s);

/// All simplices of dimension <= max_dim whose diameter is at most r (+ eps_eq).
SimplicialComplex vr_complex(const FiniteMetricSpace& x, double r, int max_dim, double eps_eq = 1e-9);

VRFiltration vr_filtration(const FiniteMetricSpace& x, int max_dim = kDefaultMaxDim, double eps_eq = 1e-9);

/// Pushforward of mu (x) mu under the distance function, supported on the critical grid.
DiscreteMeasure1D gdd(const MMSpace& x, double eps_eq = 1e-9);

WeightedVRFiltration weighted_vr(const MMSpace& x, int max_dim = kDefaultMaxDim, double eps_eq = 1e-9);

}  // namespace wpdkit
