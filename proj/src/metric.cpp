#include "wpdkit/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "wpdkit/bits.hpp"
#include "wpdkit/transport.hpp"

namespace wpdkit {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

FiniteMetricSpace FiniteMetricSpace::unchecked(std::size_t n, std::vector<double> row_major) {
  if (row_major.size() != n * n) throw ValidationError("distance matrix must have n*n entries");
  FiniteMetricSpace s;
  s.n_ = n;
  s.d_ = std::move(row_major);
  return s;
}

MMSpace::MMSpace(FiniteMetricSpace space, std::vector<double> mu, const Tolerances& tol)
    : space_(std::move(space)), mu_(std::move(mu)) {
  if (mu_.size() != space_.size())
    throw ValidationError("measure has " + std::to_string(mu_.size()) + " entries for " +
                          std::to_string(space_.size()) + " points");
  double total = 0.0;
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    if (!(mu_[i] > 0.0)) throw ValidationError("measure must have full support (mu[" + std::to_string(i) + "] <= 0)");
    total += mu_[i];
  }
  if (std::abs(total - 1.0) > tol.eps_mass)
    throw ValidationError("measure must sum to 1 (got " + std::to_string(total) + ")");
}

MMSpace MMSpace::uniform(FiniteMetricSpace space) {
  const std::size_t n = space.size();
  if (n == 0) throw ValidationError("empty space");
  return MMSpace(std::move(space), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

bool PointMap::surjective() const {
  std::vector<char> hit(target_size, 0);
  for (auto v : image) hit[v] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

PointMap PointMap::identity(std::size_t n) {
  PointMap f;
  f.target_size = n;
  f.image.resize(n);
  std::iota(f.image.begin(), f.image.end(), 0);
  return f;
}

Correspondence::Correspondence(std::size_t nx, std::size_t ny,
                               std::vector<std::pair<std::size_t, std::size_t>> pairs)
    : nx_(nx), ny_(ny), pairs_(std::move(pairs)) {
  std::vector<char> hx(nx, 0), hy(ny, 0);
  for (auto [i, j] : pairs_) {
    if (i >= nx || j >= ny) throw ValidationError("correspondence pair out of range");
    hx[i] = 1;
    hy[j] = 1;
  }
  if (std::count(hx.begin(), hx.end(), 0) || std::count(hy.begin(), hy.end(), 0))
    throw ValidationError("correspondence projections must be surjective");
}

Coupling::Coupling(std::size_t rows, std::size_t cols, std::vector<double> mass, std::span<const double> mu_x,
                   std::span<const double> mu_y, double eps_mass)
    : rows_(rows), cols_(cols), mass_(std::move(mass)) {
  if (mass_.size() != rows * cols || mu_x.size() != rows || mu_y.size() != cols)
    throw ValidationError("coupling dimensions do not match the marginals");
  std::vector<double> rs(rows, 0.0), cs(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = mass_[i * cols + j];
      if (v < 0.0) throw ValidationError("coupling has a negative entry");
      rs[i] += v;
      cs[j] += v;
    }
  // Marginal errors accumulate over a row, so scale the tolerance with its length.
  const double slack = eps_mass * static_cast<double>(std::max(rows, cols));
  for (std::size_t i = 0; i < rows; ++i)
    if (std::abs(rs[i] - mu_x[i]) > slack) throw ValidationError("coupling row marginal mismatch at " + std::to_string(i));
  for (std::size_t j = 0; j < cols; ++j)
    if (std::abs(cs[j] - mu_y[j]) > slack) throw ValidationError("coupling column marginal mismatch at " + std::to_string(j));
}

Coupling Coupling::product(std::span<const double> mu_x, std::span<const double> mu_y) {
  std::vector<double> m(mu_x.size() * mu_y.size());
  for (std::size_t i = 0; i < mu_x.size(); ++i)
    for (std::size_t j = 0; j < mu_y.size(); ++j) m[i * mu_y.size() + j] = mu_x[i] * mu_y[j];
  return Coupling(mu_x.size(), mu_y.size(), std::move(m), mu_x, mu_y);
}

DiscreteMeasure1D::DiscreteMeasure1D(std::vector<double> support, std::vector<double> mass, double eps_mass)
    : support_(std::move(support)), mass_(std::move(mass)) {
  if (support_.size() != mass_.size() || support_.empty())
    throw ValidationError("1-D measure needs matching, nonempty support and mass vectors");
  double total = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (i > 0 && !(support_[i] > support_[i - 1])) throw ValidationError("1-D measure support must be strictly increasing");
    if (!(mass_[i] > 0.0)) throw ValidationError("1-D measure masses must be positive");
    total += mass_[i];
  }
  if (std::abs(total - 1.0) > eps_mass * static_cast<double>(support_.size()))
    throw ValidationError("1-D measure must sum to 1");
}

DiscreteMeasure1D DiscreteMeasure1D::dirac(double at) { return DiscreteMeasure1D({at}, {1.0}); }

// ---------------------------------------------------------------------------
// Validation and maps
// ---------------------------------------------------------------------------

FiniteMetricSpace validate_pseudo_metric(const std::vector<std::vector<double>>& matrix, double tol) {
  const std::size_t n = matrix.size();
  if (n == 0) throw ValidationError("distance matrix is empty");
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n)
      throw ValidationError("distance matrix is not square: row " + std::to_string(i) + " has " +
                            std::to_string(matrix[i].size()) + " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i][j];
      if (!std::isfinite(v)) throw ValidationError("non-finite entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (v < 0.0) throw ValidationError("negative entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      d[i * n + j] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(d[i * n + i]) > tol)
      throw ValidationError("nonzero diagonal entry at (" + std::to_string(i) + "," + std::to_string(i) + ")");
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(d[i * n + j] - d[j * n + i]) > tol) {
        std::ostringstream os;
        os << "asymmetric entries: d[" << i << "][" << j << "]=" << d[i * n + j] << " but d[" << j << "][" << i
           << "]=" << d[j * n + i];
        throw ValidationError(os.str());
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (d[i * n + k] > d[i * n + j] + d[j * n + k] + tol) {
          std::ostringstream os;
          os << "triangle inequality violated for (i,j,k)=(" << i << "," << j << "," << k << "): d[i][k]="
             << d[i * n + k] << " > d[i][j]+d[j][k]=" << d[i * n + j] + d[j * n + k];
          throw ValidationError(os.str());
        }
  for (std::size_t i = 0; i < n; ++i) {
    d[i * n + i] = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) d[j * n + i] = d[i * n + j];
  }
  return FiniteMetricSpace::unchecked(n, std::move(d));
}

FiniteMetricSpace euclidean_space(const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  if (n == 0) throw ValidationError("point cloud is empty");
  const std::size_t dim = points.front().size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].size() != dim)
      throw ValidationError("point " + std::to_string(i) + " has " + std::to_string(points[i].size()) +
                            " coordinates, expected " + std::to_string(dim));
    for (std::size_t j = 0; j < i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double t = points[i][k] - points[j][k];
        s += t * t;
      }
      d[i * n + j] = d[j * n + i] = std::sqrt(s);
    }
  }
  return FiniteMetricSpace::unchecked(n, std::move(d));
}

namespace {

void check_map(const PointMap& f, const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  if (f.source_size() != x.size() || f.target_size != y.size())
    throw ValidationError("map size does not match the spaces");
  for (auto v : f.image)
    if (v >= y.size()) throw ValidationError("map image out of range");
}

}  // namespace

double distortion_of_map(const PointMap& f, const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  check_map(f, x, y);
  double dis = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      dis = std::max(dis, std::abs(x(i, j) - y(f.image[i], f.image[j])));
  return dis;
}

bool is_order_preserving(const PointMap& f, const FiniteMetricSpace& x, const FiniteMetricSpace& y, double eps_eq) {
  check_map(f, x, y);
  // Sort pairs by d_X; equal d_X forces equal d_Y, and d_Y must be nondecreasing
  // across increasing d_X groups.
  struct Pair {
    double dx, dy;
  };
  std::vector<Pair> pairs;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pairs.push_back({x(i, j), y(f.image[i], f.image[j])});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.dx < b.dx; });
  double prev_group_max = -kInfinity;
  std::size_t g = 0;
  while (g < pairs.size()) {
    std::size_t h = g;
    double lo = pairs[g].dy, hi = pairs[g].dy;
    while (h < pairs.size() && pairs[h].dx <= pairs[g].dx + eps_eq) {
      lo = std::min(lo, pairs[h].dy);
      hi = std::max(hi, pairs[h].dy);
      ++h;
    }
    if (hi - lo > eps_eq) return false;
    if (lo < prev_group_max - eps_eq) return false;
    prev_group_max = std::max(prev_group_max, hi);
    g = h;
  }
  return true;
}

MorphismReport check_morphism(const PointMap& f, const MMSpace& x, const MMSpace& y, const Tolerances& tol) {
  MorphismReport r;
  if (f.source_size() != x.size() || f.target_size != y.size()) return r;
  r.surjective = f.surjective();
  r.order_preserving = is_order_preserving(f, x.space(), y.space(), tol.eps_eq);
  std::vector<double> push(y.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) push[f.image[i]] += x.mu()[i];
  r.monge = true;
  for (std::size_t j = 0; j < y.size(); ++j)
    if (std::abs(push[j] - y.mu()[j]) > tol.eps_mass) r.monge = false;
  return r;
}

FiniteMetricSpace pullback_metric(const PointMap& phi, const FiniteMetricSpace& x) {
  if (phi.target_size != x.size()) throw ValidationError("pullback map target does not match the space");
  const std::size_t n = phi.source_size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = x(phi.image[i], phi.image[j]);
  return FiniteMetricSpace::unchecked(n, std::move(d));
}

double correspondence_distortion(const Correspondence& r, const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  double dis = 0.0;
  for (auto [a, b] : r.pairs())
    for (auto [c, e] : r.pairs()) dis = std::max(dis, std::abs(x(a, c) - y(b, e)));
  return dis;
}

// ---------------------------------------------------------------------------
// Exact GH / GW_inf by threshold search over supports
// ---------------------------------------------------------------------------

namespace {

// Cells are (x, y) pairs, index x * m + y. Two cells are compatible at threshold t
// when |d_X(x,x') - d_Y(y,y')| <= t. A set of cells is admissible when it is a
// clique of the compatibility graph; `accept` decides whether a clique is good
// enough (covers both sides / carries a coupling) and `restrict` may shrink the
// candidate set to the cells that can matter.
class SupportSearch {
 public:
  using Accept = std::function<bool(const BitVector&)>;
  using Restrict = std::function<bool(BitVector&)>;  // returns false when hopeless

  SupportSearch(const FiniteMetricSpace& x, const FiniteMetricSpace& y) : x_(x), y_(y) {
    const std::size_t n = x.size(), m = y.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t b = 0; b < m; ++b)
          for (std::size_t e = 0; e < m; ++e) thresholds_.push_back(std::abs(x(a, c) - y(b, e)));
    std::sort(thresholds_.begin(), thresholds_.end());
    thresholds_.erase(std::unique(thresholds_.begin(), thresholds_.end(),
                                  [](double u, double v) { return v - u <= 1e-12; }),
                      thresholds_.end());
  }

  /// Smallest threshold at which a clique passing `accept` exists.
  double minimal_threshold(const Restrict& restrict, const Accept& accept) {
    std::size_t lo = 0, hi = thresholds_.size() - 1;  // the largest threshold is always feasible
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (feasible(thresholds_[mid], restrict, accept))
        hi = mid;
      else
        lo = mid + 1;
    }
    return thresholds_[lo];
  }

 private:
  bool feasible(double t, const Restrict& restrict, const Accept& accept) {
    const std::size_t n = x_.size(), m = y_.size(), cells = n * m;
    compat_.assign(cells, BitVector(cells));
    for (std::size_t c = 0; c < cells; ++c)
      for (std::size_t k = 0; k < cells; ++k)
        if (std::abs(x_(c / m, k / m) - y_(c % m, k % m)) <= t + 1e-12) compat_[c].set(k);
    BitVector all(cells);
    for (std::size_t c = 0; c < cells; ++c) all.set(c);
    return search(all, restrict, accept);
  }

  bool search(BitVector cand, const Restrict& restrict, const Accept& accept) {
    if (!restrict(cand)) return false;
    // Branch on the candidate with the most conflicts inside the candidate set.
    std::ptrdiff_t pick = -1;
    std::size_t worst = 0;
    cand.for_each_set([&](std::size_t c) {
      const std::size_t conflicts = cand.count_without(compat_[c]);
      if (conflicts > worst) {
        worst = conflicts;
        pick = static_cast<std::ptrdiff_t>(c);
      }
    });
    if (pick < 0) return accept(cand);
    const auto c = static_cast<std::size_t>(pick);
    BitVector with = cand;
    with &= compat_[c];
    if (search(with, restrict, accept)) return true;
    BitVector without = cand;
    without.reset(c);
    return search(without, restrict, accept);
  }

  const FiniteMetricSpace& x_;
  const FiniteMetricSpace& y_;
  std::vector<double> thresholds_;
  std::vector<BitVector> compat_;
};

bool covers_both_sides(const BitVector& cells, std::size_t n, std::size_t m) {
  std::vector<char> hx(n, 0), hy(m, 0);
  cells.for_each_set([&](std::size_t c) {
    hx[c / m] = 1;
    hy[c % m] = 1;
  });
  return std::all_of(hx.begin(), hx.end(), [](char v) { return v != 0; }) &&
         std::all_of(hy.begin(), hy.end(), [](char v) { return v != 0; });
}

void enforce_cap(const char* name, std::size_t cells, std::size_t cap) {
  if (cells > cap) throw CapExceededError(name, cap, cells);
}

}  // namespace

double gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y, std::size_t cell_cap) {
  enforce_cap("exact_cells", x.size() * y.size(), cell_cap);
  const std::size_t n = x.size(), m = y.size();
  SupportSearch search(x, y);
  const auto coverage = [n, m](BitVector& cand) { return covers_both_sides(cand, n, m); };
  const auto accept = [n, m](const BitVector& cand) { return covers_both_sides(cand, n, m); };
  return 0.5 * search.minimal_threshold(coverage, accept);
}

double gw_inf_exact(const MMSpace& x, const MMSpace& y, std::size_t cell_cap) {
  enforce_cap("exact_cells", x.size() * y.size(), cell_cap);
  const std::size_t n = x.size(), m = y.size();
  SupportSearch search(x.space(), y.space());
  // Drop cells that cannot carry mass in any coupling living on the candidates;
  // repeat until stable.
  const auto restrict = [&](BitVector& cand) {
    while (true) {
      transport::CellMask mask(n * m, 0);
      cand.for_each_set([&](std::size_t c) { mask[c] = 1; });
      const auto analysis = transport::analyze_support(x.mu(), y.mu(), mask);
      if (!analysis.feasible) return false;
      BitVector next(n * m);
      for (std::size_t c = 0; c < n * m; ++c)
        if (analysis.reachable[c]) next.set(c);
      if (next == cand) return true;
      cand = next;
    }
  };
  const auto accept = [](const BitVector&) { return true; };
  return 0.5 * search.minimal_threshold(restrict, accept);
}

// ---------------------------------------------------------------------------
// p-distortion and GW_p upper bounds
// ---------------------------------------------------------------------------

double p_distortion(const Coupling& mu, const MMSpace& x, const MMSpace& y, double p) {
  const std::size_t n = x.size(), m = y.size();
  if (mu.rows() != n || mu.cols() != m) throw ValidationError("coupling dimensions do not match the spaces");
  // Re-validate marginals (the coupling may have been built for other measures).
  Coupling(n, m, mu.data(), x.mu(), y.mu(), 1e-9);
  if (is_infinite_p(p)) {
    double dis = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        if (mu(a, b) <= 0.0) continue;
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t e = 0; e < m; ++e)
            if (mu(c, e) > 0.0) dis = std::max(dis, std::abs(x.space()(a, c) - y.space()(b, e)));
      }
    return dis;
  }
  if (!(p >= 1.0)) throw ValidationError("p must lie in [1, inf]");
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double wab = mu(a, b);
      if (wab == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < m; ++e)
          s += std::pow(std::abs(x.space()(a, c) - y.space()(b, e)), p) * wab * mu(c, e);
    }
  return std::pow(s, 1.0 / p);
}

GwUpperResult gw_p_upper(const MMSpace& x, const MMSpace& y, double p, int restarts, std::uint64_t seed,
                         const std::vector<Coupling>& initial) {
  if (is_infinite_p(p) || !(p >= 1.0)) throw ValidationError("gw_p_upper needs a finite p >= 1");
  const std::size_t n = x.size(), m = y.size();
  // Cost tensor L((a,b),(c,e)) = |d_X(a,c) - d_Y(b,e)|^p.
  std::vector<double> cost(n * m * n * m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < m; ++e)
          cost[(a * m + b) * n * m + c * m + e] = std::pow(std::abs(x.space()(a, c) - y.space()(b, e)), p);
  const std::size_t cells = n * m;
  transport::QuadraticForm form;
  form.rows = n;
  form.cols = m;
  form.apply = [&cost, cells](std::span<const double> plan, std::span<double> out) {
    for (std::size_t c = 0; c < cells; ++c) {
      double s = 0.0;
      const double* row = cost.data() + c * cells;
      for (std::size_t k = 0; k < cells; ++k) s += row[k] * plan[k];
      out[c] = s;
    }
  };
  auto starts = transport::default_starts(x.mu(), y.mu(), std::max(1, restarts), seed);
  for (const auto& init : initial) starts.push_back(init.data());
  const auto best = transport::minimize_quadratic(form, x.mu(), y.mu(), starts);
  GwUpperResult out;
  out.coupling = Coupling(n, m, best.plan, x.mu(), y.mu(), 1e-9);
  out.value = 0.5 * p_distortion(out.coupling, x, y, p);
  return out;
}

// ---------------------------------------------------------------------------
// 1-D Wasserstein
// ---------------------------------------------------------------------------

double wasserstein_1d(const DiscreteMeasure1D& a, const DiscreteMeasure1D& b, double p) {
  // Walk the quantile functions together: each step consumes the smaller residual mass.
  std::size_t i = 0, j = 0;
  double ra = a.mass()[0], rb = b.mass()[0];
  double acc = 0.0, worst = 0.0;
  const bool inf = is_infinite_p(p);
  while (i < a.size() && j < b.size()) {
    const double step = std::min(ra, rb);
    const double gap = std::abs(a.support()[i] - b.support()[j]);
    if (step > 1e-15) {
      if (inf)
        worst = std::max(worst, gap);
      else
        acc += std::pow(gap, p) * step;
    }
    ra -= step;
    rb -= step;
    if (ra <= 1e-15) {
      if (++i < a.size()) ra = a.mass()[i];
    }
    if (rb <= 1e-15) {
      if (++j < b.size()) rb = b.mass()[j];
    }
  }
  return inf ? worst : std::pow(acc, 1.0 / p);
}

}  // namespace wpdkit
