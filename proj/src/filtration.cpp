#include "wpdkit/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace wpdkit {

// ---------------------------------------------------------------------------
// CriticalGrid
// ---------------------------------------------------------------------------

CriticalGrid::CriticalGrid(std::vector<double> values, double eps_eq) : eps_(eps_eq) {
  if (!(eps_eq >= 0.0)) throw ValidationError("eps_eq must be nonnegative");
  values.push_back(0.0);
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("grid values must be finite and nonnegative");
  std::sort(values.begin(), values.end());
  values_.clear();
  for (double v : values)
    if (values_.empty() || v > values_.back() + eps_) values_.push_back(v);
}

std::size_t CriticalGrid::index_of(double value) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), value + eps_);
  if (it == values_.begin()) throw ValidationError("value " + std::to_string(value) + " is not on the grid");
  const auto i = static_cast<std::size_t>(it - values_.begin()) - 1;
  if (value < values_[i] - eps_ || value > values_[i] + eps_)
    throw ValidationError("value " + std::to_string(value) + " is not on the grid");
  return i;
}

bool CriticalGrid::contains(double value) const {
  try {
    index_of(value);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

CriticalGrid merge_grids(const CriticalGrid& a, const CriticalGrid& b) {
  std::vector<double> all = a.values();
  all.insert(all.end(), b.values().begin(), b.values().end());
  return CriticalGrid(std::move(all), std::max(a.eps_eq(), b.eps_eq()));
}

// ---------------------------------------------------------------------------
// SimplicialComplex
// ---------------------------------------------------------------------------

void SimplicialComplex::insert_closed(Simplex s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty()) return;
  for (auto v : s)
    if (v >= vertex_count_) throw ValidationError("simplex vertex out of range");
  const std::size_t k = s.size();
  if (by_dim_.size() < k) by_dim_.resize(k);
  // every nonempty subset is a face
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    Simplex f;
    for (std::size_t b = 0; b < k; ++b)
      if (mask >> b & 1u) f.push_back(s[b]);
    auto& bucket = by_dim_[f.size() - 1];
    auto it = std::lower_bound(bucket.begin(), bucket.end(), f);
    if (it == bucket.end() || *it != f) bucket.insert(it, std::move(f));
  }
}

const std::vector<Simplex>& SimplicialComplex::simplices(int d) const {
  static const std::vector<Simplex> empty;
  if (d < 0 || static_cast<std::size_t>(d) >= by_dim_.size()) return empty;
  return by_dim_[static_cast<std::size_t>(d)];
}

std::size_t SimplicialComplex::size() const {
  std::size_t n = 0;
  for (const auto& b : by_dim_) n += b.size();
  return n;
}

bool SimplicialComplex::contains(const Simplex& s) const {
  const auto& bucket = simplices(static_cast<int>(s.size()) - 1);
  return std::binary_search(bucket.begin(), bucket.end(), s);
}

// ---------------------------------------------------------------------------
// VRFiltration
// ---------------------------------------------------------------------------

VRFiltration::VRFiltration(FiniteMetricSpace space, CriticalGrid grid, int max_dim,
                           std::vector<std::vector<FilteredSimplex>> simplices)
    : space_(std::move(space)), grid_(std::move(grid)), max_dim_(max_dim), simplices_(std::move(simplices)) {
  simplices_.resize(static_cast<std::size_t>(max_dim_) + 1);
  prefix_.assign(simplices_.size(), std::vector<std::size_t>(grid_.size(), 0));
  for (std::size_t d = 0; d < simplices_.size(); ++d) {
    auto& list = simplices_[d];
    std::sort(list.begin(), list.end(), [](const FilteredSimplex& a, const FilteredSimplex& b) {
      return a.grid_index != b.grid_index ? a.grid_index < b.grid_index : a.vertices < b.vertices;
    });
    for (const auto& s : list) ++prefix_[d][s.grid_index];
    for (std::size_t i = 1; i < grid_.size(); ++i) prefix_[d][i] += prefix_[d][i - 1];
  }
}

const std::vector<FilteredSimplex>& VRFiltration::simplices(int d) const {
  static const std::vector<FilteredSimplex> empty;
  if (d < 0 || d > max_dim_) return empty;
  return simplices_[static_cast<std::size_t>(d)];
}

std::size_t VRFiltration::count(int d, std::size_t i) const {
  if (d < 0 || d > max_dim_) return 0;
  return prefix_[static_cast<std::size_t>(d)][i];
}

std::size_t VRFiltration::index_of(const Simplex& s) const {
  const int d = static_cast<int>(s.size()) - 1;
  const auto& list = simplices(d);
  if (list.empty()) throw ValidationError("simplex dimension out of range");
  const std::size_t gi = grid_.index_of(diameter(space_, s));
  const FilteredSimplex key{s, 0.0, gi};
  auto it = std::lower_bound(list.begin(), list.end(), key, [](const FilteredSimplex& a, const FilteredSimplex& b) {
    return a.grid_index != b.grid_index ? a.grid_index < b.grid_index : a.vertices < b.vertices;
  });
  if (it == list.end() || it->vertices != s) throw ValidationError("simplex not in filtration");
  return static_cast<std::size_t>(it - list.begin());
}

SimplicialComplex VRFiltration::complex_at(std::size_t i) const {
  SimplicialComplex k(space_.size());
  for (int d = max_dim_; d >= 0; --d)
    for (std::size_t t = 0; t < count(d, i); ++t) k.insert_closed(simplices(d)[t].vertices);
  return k;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

CriticalGrid critical_grid(const FiniteMetricSpace& x, double eps_eq) {
  return CriticalGrid(x.data(), eps_eq);
}

double diameter(const FiniteMetricSpace& x, const Simplex& s) {
  double d = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b) d = std::max(d, x(s[a], s[b]));
  return d;
}

namespace {

void check_max_dim(int max_dim) {
  if (max_dim < 0) throw ValidationError("max_dim must be nonnegative");
}

// Enumerates cliques of the graph {(u,v): admissible(u,v)} with at most max_dim + 1
// vertices by extending each clique with larger-index common neighbours.
template <typename Visit>
void expand_cliques(std::size_t n, int max_dim, const std::function<bool(std::size_t, std::size_t)>& admissible,
                    Visit&& visit) {
  std::vector<std::vector<std::size_t>> up(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (admissible(u, v)) up[u].push_back(v);
  Simplex current;
  std::function<void(const std::vector<std::size_t>&)> grow = [&](const std::vector<std::size_t>& candidates) {
    visit(current);
    if (static_cast<int>(current.size()) > max_dim) return;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const std::size_t v = candidates[k];
      std::vector<std::size_t> next;
      for (std::size_t t = k + 1; t < candidates.size(); ++t)
        if (std::binary_search(up[v].begin(), up[v].end(), candidates[t])) next.push_back(candidates[t]);
      current.push_back(v);
      grow(next);
      current.pop_back();
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    current.assign(1, v);
    grow(up[v]);
  }
}

}  // namespace

SimplicialComplex vr_complex(const FiniteMetricSpace& x, double r, int max_dim, double eps_eq) {
  check_max_dim(max_dim);
  if (!(r >= 0.0)) throw ValidationError("scale r must be nonnegative");
  SimplicialComplex k(x.size());
  expand_cliques(x.size(), max_dim, [&](std::size_t u, std::size_t v) { return x(u, v) <= r + eps_eq; },
                 [&](const Simplex& s) { k.insert_closed(s); });
  return k;
}

VRFiltration vr_filtration(const FiniteMetricSpace& x, int max_dim, double eps_eq) {
  check_max_dim(max_dim);
  CriticalGrid grid = critical_grid(x, eps_eq);
  std::vector<std::vector<FilteredSimplex>> simplices(static_cast<std::size_t>(max_dim) + 1);
  expand_cliques(x.size(), max_dim, [](std::size_t, std::size_t) { return true; }, [&](const Simplex& s) {
    const double diam = diameter(x, s);
    simplices[s.size() - 1].push_back({s, diam, grid.index_of(diam)});
  });
  return VRFiltration(x, std::move(grid), max_dim, std::move(simplices));
}

DiscreteMeasure1D gdd(const MMSpace& x, double eps_eq) {
  const CriticalGrid grid = critical_grid(x.space(), eps_eq);
  std::vector<double> mass(grid.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) mass[grid.index_of(x.space()(i, j))] += x.mu()[i] * x.mu()[j];
  return DiscreteMeasure1D(grid.values(), std::move(mass), 1e-12);
}

WeightedVRFiltration weighted_vr(const MMSpace& x, int max_dim, double eps_eq) {
  return {vr_filtration(x.space(), max_dim, eps_eq), gdd(x, eps_eq)};
}

}  // namespace wpdkit
