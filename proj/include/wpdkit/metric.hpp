#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wpdkit/common.hpp"

namespace wpdkit {

/// A finite pseudo-metric space stored as a dense row-major distance matrix.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }
  const std::vector<double>& data() const noexcept { return d_; }

  /// Wraps a matrix without checking the axioms; use validate_pseudo_metric for untrusted input.
  static FiniteMetricSpace unchecked(std::size_t n, std::vector<double> row_major);

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Finite metric-measure space with a fully supported probability measure.
class MMSpace {
 public:
  MMSpace() = default;
  MMSpace(FiniteMetricSpace space, std::vector<double> mu, const Tolerances& tol = {});

  static MMSpace uniform(FiniteMetricSpace space);

  const FiniteMetricSpace& space() const noexcept { return space_; }
  const std::vector<double>& mu() const noexcept { return mu_; }
  std::size_t size() const noexcept { return space_.size(); }

 private:
  FiniteMetricSpace space_;
  std::vector<double> mu_;
};

/// A total function between index sets {0..source_size-1} -> {0..target_size-1}.
struct PointMap {
  std::size_t target_size = 0;
  std::vector<std::size_t> image;  // image[i] = f(i)

  std::size_t source_size() const noexcept { return image.size(); }
  bool surjective() const;
  static PointMap identity(std::size_t n);
};

/// A relation between X and Y whose projections are both surjective.
class Correspondence {
 public:
  Correspondence(std::size_t nx, std::size_t ny, std::vector<std::pair<std::size_t, std::size_t>> pairs);

  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const noexcept { return pairs_; }
  std::size_t source_size() const noexcept { return nx_; }
  std::size_t target_size() const noexcept { return ny_; }

 private:
  std::size_t nx_;
  std::size_t ny_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Dense coupling matrix (rows index X, columns index Y).
class Coupling {
 public:
  Coupling() = default;
  /// Checks nonnegativity and both marginals against mu_x / mu_y.
  Coupling(std::size_t rows, std::size_t cols, std::vector<double> mass, std::span<const double> mu_x,
           std::span<const double> mu_y, double eps_mass = 1e-12);

  static Coupling product(std::span<const double> mu_x, std::span<const double> mu_y);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return mass_[i * cols_ + j]; }
  const std::vector<double>& data() const noexcept { return mass_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> mass_;
};

/// Finitely supported probability measure on the real line.
class DiscreteMeasure1D {
 public:
  DiscreteMeasure1D() = default;
  /// Support must be strictly increasing, masses positive and summing to one.
  DiscreteMeasure1D(std::vector<double> support, std::vector<double> mass, double eps_mass = 1e-12);

  static DiscreteMeasure1D dirac(double at);

  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& mass() const noexcept { return mass_; }
  std::size_t size() const noexcept { return support_.size(); }

 private:
  std::vector<double> support_;
  std::vector<double> mass_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Checks squareness, symmetry, nonnegativity, zero diagonal and the triangle
/// inequality (within `tol`). The thrown ValidationError names the offending entries.
FiniteMetricSpace validate_pseudo_metric(const std::vector<std::vector<double>>& matrix,
                                         double tol = 1e-9);

/// Euclidean distance matrix of a point cloud (rows are coordinates).
FiniteMetricSpace euclidean_space(const std::vector<std::vector<double>>& points);

double distortion_of_map(const PointMap& f, const FiniteMetricSpace& x, const FiniteMetricSpace& y);

struct MorphismReport {
  bool order_preserving = false;
  bool monge = false;
  bool surjective = false;
};

MorphismReport check_morphism(const PointMap& f, const MMSpace& x, const MMSpace& y,
                              const Tolerances& tol = {});

/// Metric order preservation alone: d_X(a) <= d_X(b) implies d_Y(f a) <= d_Y(f b).
bool is_order_preserving(const PointMap& f, const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                         double eps_eq = 1e-9);

FiniteMetricSpace pullback_metric(const PointMap& phi, const FiniteMetricSpace& x);

/// Max |d_X - d_Y| over all pairs of related pairs.
double correspondence_distortion(const Correspondence& r, const FiniteMetricSpace& x,
                                 const FiniteMetricSpace& y);

inline constexpr std::size_t kDefaultExactCellCap = 20;

/// Exact Gromov-Hausdorff distance (half the least distortion of a correspondence).
/// Throws CapExceededError when |X|*|Y| > cell_cap.
double gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                std::size_t cell_cap = kDefaultExactCellCap);

/// p-distortion of a coupling; p may be kInfinity (max over the support).
double p_distortion(const Coupling& mu, const MMSpace& x, const MMSpace& y, double p);

/// Exact GW_inf (half the least inf-distortion over coupling supports).
double gw_inf_exact(const MMSpace& x, const MMSpace& y, std::size_t cell_cap = kDefaultExactCellCap);

struct GwUpperResult {
  double value = 0.0;  // 0.5 * dis_p(coupling)
  Coupling coupling;
};

/// Upper bound on GW_p from alternating linearization over the transportation polytope.
/// Starting points: product coupling, then `restarts - 1` northwest-corner vertices
/// (the first in natural order, later ones with shuffled orders). Extra starting
/// couplings may be supplied through `initial`.
GwUpperResult gw_p_upper(const MMSpace& x, const MMSpace& y, double p, int restarts, std::uint64_t seed,
                         const std::vector<Coupling>& initial = {});

/// Exact 1-D p-Wasserstein distance through the quantile coupling; p may be kInfinity.
double wasserstein_1d(const DiscreteMeasure1D& a, const DiscreteMeasure1D& b, double p);

}  // namespace wpdkit
