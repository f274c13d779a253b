#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wpdkit::transport {

/// Dinic max-flow over real capacities. Residuals at or below `eps` count as zero.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes, double eps = 1e-14);

  /// Returns the arc id (usable with flow()).
  std::size_t add_arc(std::size_t from, std::size_t to, double capacity);
  double run(std::size_t source, std::size_t sink);
  double flow(std::size_t arc) const;
  std::size_t node_count() const noexcept { return head_.size(); }

 private:
  struct Arc {
    std::size_t to;
    double cap;
    double flow;
  };
  bool bfs(std::size_t s, std::size_t t);
  double dfs(std::size_t v, std::size_t t, double pushed);

  double eps_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> head_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

/// A set of admissible cells (i, j) of an n x m transportation table.
using CellMask = std::vector<char>;  // row-major, nonzero = admissible

struct SupportAnalysis {
  bool feasible = false;     // some coupling of (a, b) lives on the mask
  std::vector<double> plan;  // one such coupling (row-major), empty if infeasible
  CellMask reachable;        // cells positive in at least one coupling on the mask
};

/// Decides whether a coupling of `a` and `b` exists with support inside `mask`, and
/// computes the largest attainable support (cells carrying mass in some such coupling).
SupportAnalysis analyze_support(std::span<const double> a, std::span<const double> b, const CellMask& mask,
                                double mass_tol = 1e-10);

/// Modifies a coupling supported on `mask` (by pushing mass around residual cycles)
/// so that every cell listed in `required` carries positive mass. Marginals are kept.
/// Returns false if some required cell is not attainable.
bool make_cells_positive(std::vector<double>& plan, std::size_t n, std::size_t m, const CellMask& mask,
                         std::span<const std::size_t> required);

/// Exact minimum-cost transportation plan (successive shortest paths).
std::vector<double> solve_transport(std::span<const double> cost, std::span<const double> a,
                                    std::span<const double> b);

/// Northwest-corner vertex of the transportation polytope visiting rows/columns in the given order.
std::vector<double> northwest_corner(std::span<const double> a, std::span<const double> b,
                                     std::span<const std::size_t> row_order,
                                     std::span<const std::size_t> col_order);

/// Symmetric quadratic form on n*m cells: objective(P) = sum_{c,c'} L(c,c') P(c) P(c').
/// `apply` writes L*P into `out`.
struct QuadraticForm {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<void(std::span<const double> plan, std::span<double> out)> apply;
};

struct FrankWolfeOptions {
  int max_iterations = 400;
  double gap_tolerance = 1e-12;
};

struct FrankWolfeResult {
  std::vector<double> plan;
  double objective = 0.0;
};

/// Local minimization of a quadratic form over couplings of (a, b) by alternating
/// linearization with exact line search. Each start is processed independently; the
/// best result (ties broken by start order) is returned.
FrankWolfeResult minimize_quadratic(const QuadraticForm& form, std::span<const double> a,
                                    std::span<const double> b, const std::vector<std::vector<double>>& starts,
                                    const FrankWolfeOptions& options = {});

/// Product coupling followed by (restarts - 1) northwest-corner vertices: the first in
/// natural order, the rest with orders shuffled by a generator seeded with `seed`.
std::vector<std::vector<double>> default_starts(std::span<const double> a, std::span<const double> b,
                                                int restarts, std::uint64_t seed);

}  // namespace wpdkit::transport
