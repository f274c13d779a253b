#include "wpdkit/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wpdkit/homology.hpp"

namespace wpdkit {

// ---------------------------------------------------------------------------
// Interval poset and Moebius inversion
// ---------------------------------------------------------------------------

IntervalPoset::IntervalPoset(CriticalGrid grid) : grid_(std::move(grid)) {
  const std::size_t k = grid_.size();
  intervals_.reserve(k * (k + 1) / 2);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) intervals_.emplace_back(i, j);
}

std::size_t IntervalPoset::index(std::size_t i, std::size_t j) const {
  const std::size_t k = grid_.size();
  if (i > j || j >= k) throw ValidationError("interval index out of range");
  // rows 0..i-1 hold k, k-1, ..., k-i+1 intervals
  return i * k - i * (i - 1) / 2 + (j - i);
}

bool IntervalPoset::leq(std::size_t p, std::size_t q) const {
  return intervals_[p].first <= intervals_[q].first && intervals_[p].second <= intervals_[q].second;
}

double IntervalPoset::distance(std::size_t p, std::size_t q) const {
  const auto& a = intervals_[p];
  const auto& b = intervals_[q];
  return std::max(std::abs(grid_[a.first] - grid_[b.first]), std::abs(grid_[a.second] - grid_[b.second]));
}

IntervalPoset interval_poset(const CriticalGrid& grid) { return IntervalPoset(grid); }

std::vector<long long> mobius_invert(const IntervalPoset& p, const std::vector<long long>& m) {
  if (m.size() != p.size()) throw ValidationError("function size does not match the poset");
  std::vector<long long> dm(p.size(), 0);
  // lexicographic order lists every element after all of its predecessors
  for (std::size_t q = 0; q < p.size(); ++q) {
    long long below = 0;
    for (std::size_t r = 0; r < q; ++r)
      if (p.leq(r, q)) below += dm[r];
    dm[q] = m[q] - below;
  }
  return dm;
}

// ---------------------------------------------------------------------------
// Diagrams
// ---------------------------------------------------------------------------

PersistenceDiagram::PersistenceDiagram(CriticalGrid grid, int degree) : grid_(std::move(grid)), degree_(degree) {}

void PersistenceDiagram::set(std::size_t i, std::size_t j, long long multiplicity) {
  if (i > j || j >= grid_.size()) throw ValidationError("interval index out of range");
  if (multiplicity < 0) throw ValidationError("negative multiplicity");
  if (multiplicity == 0)
    entries_.erase({i, j});
  else
    entries_[{i, j}] = multiplicity;
}

void PersistenceDiagram::add(std::size_t i, std::size_t j, long long multiplicity) {
  set(i, j, this->multiplicity(i, j) + multiplicity);
}

long long PersistenceDiagram::multiplicity(std::size_t i, std::size_t j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? 0 : it->second;
}

std::vector<Bar> PersistenceDiagram::bars() const {
  std::vector<Bar> out;
  for (const auto& [iv, m] : entries_)
    if (iv.first < iv.second) out.push_back({grid_[iv.first], grid_[iv.second], m});
  return out;
}

std::map<IntervalIndex, long long> PersistenceDiagram::off_diagonal() const {
  std::map<IntervalIndex, long long> out;
  for (const auto& [iv, m] : entries_)
    if (iv.first < iv.second) out.emplace(iv, m);
  return out;
}

long long PersistenceDiagram::bar_count() const {
  long long n = 0;
  for (const auto& [iv, m] : entries_)
    if (iv.first < iv.second) n += m;
  return n;
}

PersistenceDiagram PersistenceDiagram::remap(const CriticalGrid& grid) const {
  PersistenceDiagram out(grid, degree_);
  for (const auto& [iv, m] : entries_) out.add(grid.index_of(grid_[iv.first]), grid.index_of(grid_[iv.second]), m);
  return out;
}

bool same_bars(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  const CriticalGrid merged = merge_grids(a.grid(), b.grid());
  return a.remap(merged).off_diagonal() == b.remap(merged).off_diagonal();
}

WeightedPersistenceDiagram::WeightedPersistenceDiagram(PersistenceDiagram diagram, IntervalMeasure weight,
                                                       double eps_mass)
    : diagram_(std::move(diagram)) {
  double total = 0.0;
  for (const auto& [iv, w] : weight) {
    if (iv.first > iv.second || iv.second >= diagram_.grid().size())
      throw ValidationError("weight on an interval outside the grid");
    if (!(w >= 0.0)) throw ValidationError("negative weight");
    total += w;
    if (w > 0.0) weight_.emplace(iv, w);
  }
  if (std::abs(total - 1.0) > eps_mass * static_cast<double>(std::max<std::size_t>(1, weight.size())))
    throw ValidationError("weight must sum to 1 (got " + std::to_string(total) + ")");
  for (const auto& [iv, m] : diagram_.off_diagonal())
    if (!weight_.count(iv))
      throw ValidationError("bar [" + std::to_string(diagram_.grid()[iv.first]) + "," +
                            std::to_string(diagram_.grid()[iv.second]) + "] carries no weight");
}

double WeightedPersistenceDiagram::weight(std::size_t i, std::size_t j) const {
  auto it = weight_.find({i, j});
  return it == weight_.end() ? 0.0 : it->second;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

PersistenceDiagram pd_mobius(const VRFiltration& f, int degree) {
  const BirthDeathFunction zb = zb_function(f, degree);
  const IntervalPoset poset(f.grid());
  std::vector<long long> m(poset.size());
  for (std::size_t q = 0; q < poset.size(); ++q) m[q] = zb.at(poset[q].first, poset[q].second);
  const auto dm = mobius_invert(poset, m);
  PersistenceDiagram pd(f.grid(), degree);
  for (std::size_t q = 0; q < poset.size(); ++q) {
    if (dm[q] < 0)
      throw InternalError("negative multiplicity " + std::to_string(dm[q]) + " at interval [" +
                          std::to_string(f.grid()[poset[q].first]) + "," + std::to_string(f.grid()[poset[q].second]) +
                          "]");
    if (dm[q] > 0) pd.set(poset[q].first, poset[q].second, dm[q]);
  }
  return pd;
}

IntervalMeasure flip_measure(const CriticalGrid& grid, const DiscreteMeasure1D& mu) {
  std::vector<double> on_grid(grid.size(), 0.0);
  for (std::size_t t = 0; t < mu.size(); ++t) {
    if (!grid.contains(mu.support()[t]))
      throw ValidationError("measure support point " + std::to_string(mu.support()[t]) + " is not on the grid");
    on_grid[grid.index_of(mu.support()[t])] += mu.mass()[t];
  }
  IntervalMeasure out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i; j < grid.size(); ++j) {
      const double w = (i == j ? 1.0 : 2.0) * on_grid[i] * on_grid[j];
      if (w > 0.0) out.emplace(IntervalIndex{i, j}, w);
    }
  return out;
}

WeightedPersistenceDiagram weighted_pd(const WeightedVRFiltration& wf, int degree) {
  auto weight = flip_measure(wf.filtration.grid(), wf.grid_weights);
  auto pd = pd_mobius(wf.filtration, degree);
  try {
    return WeightedPersistenceDiagram(std::move(pd), std::move(weight), 1e-9);
  } catch (const ValidationError& e) {
    throw InternalError(std::string("weighted diagram invariant broken: ") + e.what());
  }
}

DiscreteMeasure1D recover_gdd(const CriticalGrid& grid, const IntervalMeasure& weight) {
  const std::size_t k = grid.size();
  std::vector<double> m(k * k, 0.0);
  for (const auto& [iv, w] : weight) {
    if (iv.first > iv.second || iv.second >= k) throw ValidationError("weight on an interval outside the grid");
    if (iv.first == iv.second) {
      m[iv.first * k + iv.first] = w;
    } else {
      m[iv.first * k + iv.second] = w / 2.0;
      m[iv.second * k + iv.first] = w / 2.0;
    }
  }
  std::vector<double> v(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) v[i] += m[i * k + j];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (std::abs(m[i * k + j] - v[i] * v[j]) > 1e-9) throw ValidationError("not a flip measure");
  std::vector<double> support, mass;
  for (std::size_t i = 0; i < k; ++i)
    if (v[i] > 0.0) {
      support.push_back(grid[i]);
      mass.push_back(v[i]);
    }
  return DiscreteMeasure1D(std::move(support), std::move(mass), 1e-9);
}

DiscreteMeasure1D recover_gdd(const WeightedPersistenceDiagram& wpd) { return recover_gdd(wpd.grid(), wpd.weight()); }

MMSpace interval_mm_space(const CriticalGrid& grid, const IntervalMeasure& weight) {
  std::vector<IntervalIndex> points;
  std::vector<double> mu;
  for (const auto& [iv, w] : weight)
    if (w > 0.0) {
      points.push_back(iv);
      mu.push_back(w);
    }
  const std::size_t n = points.size();
  std::vector<double> d(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      d[a * n + b] = std::max(std::abs(grid[points[a].first] - grid[points[b].first]),
                              std::abs(grid[points[a].second] - grid[points[b].second]));
  double total = 0.0;
  for (double w : mu) total += w;
  for (double& w : mu) w /= total;
  return MMSpace(FiniteMetricSpace::unchecked(n, std::move(d)), std::move(mu), {1e-9, 1e-9, 1e-9});
}

}  // namespace wpdkit
