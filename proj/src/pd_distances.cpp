#include "wpdkit/pd_distances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "wpdkit/transport.hpp"

namespace wpdkit {

namespace {

constexpr double kShiftTol = 1e-12;

Interval interval_of(const CriticalGrid& g, const IntervalIndex& iv) { return {g[iv.first], g[iv.second]}; }

struct Shifts {
  double birth;
  double death;
};

Shifts shifts_of(const CriticalGrid& q, const CriticalGrid& r, const MatchingCell& c) {
  return {r[c.second.first] - q[c.first.first], r[c.second.second] - q[c.first.second]};
}

std::string interval_text(const CriticalGrid& g, const IntervalIndex& iv) {
  std::ostringstream os;
  os << "[" << g[iv.first] << "," << g[iv.second] << "]";
  return os.str();
}

// Bars (off-diagonal intervals) with their multiplicities.
std::vector<std::pair<IntervalIndex, long long>> bar_list(const PersistenceDiagram& d) {
  std::vector<std::pair<IntervalIndex, long long>> out;
  for (const auto& [iv, m] : d.off_diagonal()) out.emplace_back(iv, m);
  return out;
}

// Integer matching feasibility with diagonal sinks and sources (see header of
// find_matching below for the network).
using CellFilter = std::function<bool(const MatchingCell&)>;

// Network: src -> I (sigma), src -> J' (tau), I -> J (inf, allowed bar pairs),
// I -> I' (inf, I may end on the diagonal), J' -> J (inf, J may start on the
// diagonal), J' -> I' (inf), I' -> sink (sigma), J -> sink (tau). A full flow
// decomposes into a matching and conversely.
std::optional<Matching> find_matching(const PersistenceDiagram& s, const PersistenceDiagram& t,
                                      const CellFilter& allowed) {
  const CriticalGrid& q = s.grid();
  const CriticalGrid& r = t.grid();
  const MatchingCell anchor{{0, 0}, {0, 0}};
  if (!allowed(anchor)) return std::nullopt;
  const auto src_bars = bar_list(s);
  const auto dst_bars = bar_list(t);
  const std::size_t n = src_bars.size(), m = dst_bars.size();

  // first admissible diagonal partner of every bar
  std::vector<std::optional<std::size_t>> to_diag(n), from_diag(m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t k = 0; k < r.size() && !to_diag[a]; ++k)
      if (allowed({src_bars[a].first, {k, k}})) to_diag[a] = k;
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t k = 0; k < q.size() && !from_diag[b]; ++k)
      if (allowed({{k, k}, dst_bars[b].first})) from_diag[b] = k;

  const std::size_t source = 0, sink = 1;
  const auto node_i = [&](std::size_t a) { return 2 + a; };
  const auto node_ip = [&](std::size_t a) { return 2 + n + a; };
  const auto node_j = [&](std::size_t b) { return 2 + 2 * n + b; };
  const auto node_jp = [&](std::size_t b) { return 2 + 2 * n + m + b; };
  transport::MaxFlow flow(2 + 2 * n + 2 * m);
  const double inf = kInfinity;
  double total = 0.0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pair_arcs(n);
  std::vector<std::optional<std::size_t>> diag_out(n), diag_in(m);
  for (std::size_t a = 0; a < n; ++a) {
    const double sigma = static_cast<double>(src_bars[a].second);
    total += sigma;
    flow.add_arc(source, node_i(a), sigma);
    flow.add_arc(node_ip(a), sink, sigma);
    if (to_diag[a]) diag_out[a] = flow.add_arc(node_i(a), node_ip(a), inf);
    for (std::size_t b = 0; b < m; ++b)
      if (allowed({src_bars[a].first, dst_bars[b].first}))
        pair_arcs[a].emplace_back(b, flow.add_arc(node_i(a), node_j(b), inf));
  }
  for (std::size_t b = 0; b < m; ++b) {
    const double tau = static_cast<double>(dst_bars[b].second);
    total += tau;
    flow.add_arc(source, node_jp(b), tau);
    flow.add_arc(node_j(b), sink, tau);
    if (from_diag[b]) diag_in[b] = flow.add_arc(node_jp(b), node_j(b), inf);
    for (std::size_t a = 0; a < n; ++a) flow.add_arc(node_jp(b), node_ip(a), inf);
  }
  if (flow.run(source, sink) < total - 0.5) return std::nullopt;

  Matching g{q, r, {}};
  g.cells[anchor] += 1;
  for (std::size_t a = 0; a < n; ++a) {
    for (const auto& [b, arc] : pair_arcs[a]) {
      const auto k = std::llround(flow.flow(arc));
      if (k > 0) g.cells[{src_bars[a].first, dst_bars[b].first}] += k;
    }
    if (diag_out[a]) {
      const auto k = std::llround(flow.flow(*diag_out[a]));
      if (k > 0) g.cells[{src_bars[a].first, {*to_diag[a], *to_diag[a]}}] += k;
    }
  }
  for (std::size_t b = 0; b < m; ++b)
    if (diag_in[b]) {
      const auto k = std::llround(flow.flow(*diag_in[b]));
      if (k > 0) g.cells[{{*from_diag[b], *from_diag[b]}, dst_bars[b].first}] += k;
    }
  return g;
}

// All endpoint shifts r - q, plus 0, split into the nonpositive and nonnegative halves.
void candidate_shifts(const CriticalGrid& q, const CriticalGrid& r, std::vector<double>& lows,
                      std::vector<double>& highs) {
  std::vector<double> all{0.0};
  for (double a : q.values())
    for (double b : r.values()) all.push_back(b - a);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end(), [](double u, double v) { return v - u <= kShiftTol; }), all.end());
  lows.clear();
  highs.clear();
  for (double v : all) {
    if (v <= kShiftTol) lows.push_back(std::min(v, 0.0));
    if (v >= -kShiftTol) highs.push_back(std::max(v, 0.0));
  }
  lows.erase(std::unique(lows.begin(), lows.end()), lows.end());
  highs.erase(std::unique(highs.begin(), highs.end()), highs.end());
}

// Smallest window [lo, hi] containing 0 for which `feasible` holds. The least
// feasible hi is nondecreasing in lo, so one sweep suffices.
template <typename Feasible>
std::optional<std::pair<double, double>> narrowest_window(const std::vector<double>& lows,
                                                          const std::vector<double>& highs, Feasible&& feasible) {
  std::optional<std::pair<double, double>> best;
  std::size_t h = 0;
  for (double lo : lows) {
    while (h < highs.size() && !feasible(lo, highs[h])) ++h;
    if (h == highs.size()) break;
    if (!best || highs[h] - lo < best->second - best->first) best = std::make_pair(lo, highs[h]);
  }
  return best;
}

bool in_window(const Shifts& s, double lo, double hi) {
  return s.birth >= lo - kShiftTol && s.birth <= hi + kShiftTol && s.death >= lo - kShiftTol &&
         s.death <= hi + kShiftTol;
}

double shift_range(const CriticalGrid& q, const CriticalGrid& r, const std::vector<MatchingCell>& cells) {
  if (cells.empty()) return 0.0;
  double lo = kInfinity, hi = -kInfinity;
  for (const auto& c : cells) {
    const Shifts s = shifts_of(q, r, c);
    lo = std::min({lo, s.birth, s.death});
    hi = std::max({hi, s.birth, s.death});
  }
  return hi - lo;
}

}  // namespace

// ---------------------------------------------------------------------------
// Costs and validation
// ---------------------------------------------------------------------------

double defo(const Interval& i1, const Interval& i2, const Interval& j1, const Interval& j2) {
  const double a1 = i1.birth, b1 = i1.death, a2 = i2.birth, b2 = i2.death;
  const double c1 = j1.birth, d1 = j1.death, c2 = j2.birth, d2 = j2.death;
  return std::max({std::abs((a1 - a2) - (c1 - c2)), std::abs((a1 - b2) - (c1 - d2)), std::abs((b1 - a2) - (d1 - c2)),
                   std::abs((b1 - b2) - (d1 - d2))});
}

std::string to_string(DistanceMode mode) { return mode == DistanceMode::exact ? "exact" : "upper_bound"; }

MatchingReport validate_matching(const Matching& g, const PersistenceDiagram& s, const PersistenceDiagram& t) {
  MatchingReport rep;
  const auto fail = [&](std::string msg) {
    rep.valid = false;
    rep.problems.push_back(std::move(msg));
  };
  const CriticalGrid& q = g.source_grid;
  const CriticalGrid& r = g.target_grid;
  if (q.values() != s.grid().values() || r.values() != t.grid().values()) fail("matching grids differ from the diagram grids");
  std::map<IntervalIndex, long long> out, in;
  for (const auto& [c, k] : g.cells) {
    if (k <= 0) fail("non-positive matching entry");
    if (c.first.first > c.first.second || c.first.second >= q.size() || c.second.first > c.second.second ||
        c.second.second >= r.size()) {
      fail("matching cell outside the grids");
      continue;
    }
    out[c.first] += k;
    in[c.second] += k;
  }
  if (!rep.valid) return rep;
  for (const auto& [iv, k] : out)
    if (iv.first < iv.second && k != s.multiplicity(iv.first, iv.second))
      fail("source bar " + interval_text(q, iv) + " matched " + std::to_string(k) + " times, multiplicity " +
           std::to_string(s.multiplicity(iv.first, iv.second)));
  for (const auto& [iv, k] : s.off_diagonal())
    if (!out.count(iv)) fail("source bar " + interval_text(q, iv) + " unmatched");
  for (const auto& [iv, k] : in)
    if (iv.first < iv.second && k != t.multiplicity(iv.first, iv.second))
      fail("target bar " + interval_text(r, iv) + " matched " + std::to_string(k) + " times, multiplicity " +
           std::to_string(t.multiplicity(iv.first, iv.second)));
  for (const auto& [iv, k] : t.off_diagonal())
    if (!in.count(iv)) fail("target bar " + interval_text(r, iv) + " unmatched");
  auto anchor = g.cells.find({{0, 0}, {0, 0}});
  if (anchor == g.cells.end() || anchor->second != 1) fail("anchor [0,0] -> [0,0] must have value 1");
  return rep;
}

MatchingReport validate_weighted_matching(const WeightedMatching& w, const WeightedPersistenceDiagram& s,
                                          const WeightedPersistenceDiagram& t, double eps_mass) {
  MatchingReport rep = validate_matching(w.gamma, s.diagram(), t.diagram());
  const auto fail = [&](std::string msg) {
    rep.valid = false;
    rep.problems.push_back(std::move(msg));
  };
  std::map<IntervalIndex, double> out, in;
  for (const auto& [c, mass] : w.eta) {
    if (!(mass > 0.0)) fail("non-positive coupling entry");
    out[c.first] += mass;
    in[c.second] += mass;
  }
  const double slack = eps_mass * static_cast<double>(std::max<std::size_t>(1, w.eta.size()));
  std::map<IntervalIndex, double> want_out = s.weight(), want_in = t.weight();
  for (const auto& [iv, mass] : out) want_out.try_emplace(iv, 0.0);
  for (const auto& [iv, mass] : in) want_in.try_emplace(iv, 0.0);
  for (const auto& [iv, mass] : want_out)
    if (std::abs(out[iv] - mass) > slack) fail("coupling misses the source weight at " + interval_text(s.grid(), iv));
  for (const auto& [iv, mass] : want_in)
    if (std::abs(in[iv] - mass) > slack) fail("coupling misses the target weight at " + interval_text(t.grid(), iv));
  for (const auto& [c, k] : w.gamma.cells)
    if (!w.eta.count(c))
      fail("matched cell " + interval_text(s.grid(), c.first) + "->" + interval_text(t.grid(), c.second) +
           " carries no coupling mass");
  return rep;
}

double defcost(const Matching& g) {
  double worst = 0.0;
  for (const auto& [c1, k1] : g.cells)
    for (const auto& [c2, k2] : g.cells)
      worst = std::max(worst, defo(interval_of(g.source_grid, c1.first), interval_of(g.source_grid, c2.first),
                                   interval_of(g.target_grid, c1.second), interval_of(g.target_grid, c2.second)));
  return worst;
}

double defcost_p(const WeightedMatching& w, double p) {
  const CriticalGrid& q = w.gamma.source_grid;
  const CriticalGrid& r = w.gamma.target_grid;
  std::vector<std::pair<MatchingCell, double>> cells(w.eta.begin(), w.eta.end());
  if (is_infinite_p(p)) {
    std::vector<MatchingCell> support;
    for (const auto& [c, mass] : cells)
      if (mass > 0.0) support.push_back(c);
    return shift_range(q, r, support);
  }
  if (!(p >= 1.0)) throw ValidationError("p must lie in [1, inf]");
  double s = 0.0;
  for (const auto& [c1, m1] : cells)
    for (const auto& [c2, m2] : cells) {
      const double d = defo(interval_of(q, c1.first), interval_of(q, c2.first), interval_of(r, c1.second),
                            interval_of(r, c2.second));
      if (d > 0.0) s += std::pow(d, p) * m1 * m2;
    }
  return std::pow(s, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Unweighted
// ---------------------------------------------------------------------------

DistanceResult d_defo_exact(const PersistenceDiagram& s, const PersistenceDiagram& t, std::size_t bar_cap) {
  const auto ns = static_cast<std::size_t>(s.bar_count()), nt = static_cast<std::size_t>(t.bar_count());
  if (std::max(ns, nt) > bar_cap) throw CapExceededError("bar_cap", bar_cap, std::max(ns, nt));
  const CriticalGrid& q = s.grid();
  const CriticalGrid& r = t.grid();
  std::vector<double> lows, highs;
  candidate_shifts(q, r, lows, highs);
  const auto allowed_in = [&](double lo, double hi) {
    return [&q, &r, lo, hi](const MatchingCell& c) { return in_window(shifts_of(q, r, c), lo, hi); };
  };
  const auto window = narrowest_window(
      lows, highs, [&](double lo, double hi) { return find_matching(s, t, allowed_in(lo, hi)).has_value(); });
  if (!window) throw InternalError("no matching found even for the widest window");
  auto g = find_matching(s, t, allowed_in(window->first, window->second));
  DistanceResult res;
  res.value = defcost(*g);
  if (std::abs(res.value - (window->second - window->first)) > 1e-9)
    throw InternalError("displacement certificate does not attain the window width");
  res.mode = DistanceMode::exact;
  res.matching = std::move(g);
  return res;
}

// ---------------------------------------------------------------------------
// Bottleneck
// ---------------------------------------------------------------------------

double bottleneck(const PersistenceDiagram& s, const PersistenceDiagram& t) {
  std::vector<Interval> a, b;
  for (const auto& bar : s.bars())
    for (long long k = 0; k < bar.multiplicity; ++k) a.push_back({bar.birth, bar.death});
  for (const auto& bar : t.bars())
    for (long long k = 0; k < bar.multiplicity; ++k) b.push_back({bar.birth, bar.death});
  const std::size_t n = a.size(), m = b.size(), size = n + m;
  if (size == 0) return 0.0;
  // left: a_0..a_{n-1}, diag(b_0)..; right: b_0..b_{m-1}, diag(a_0)..
  std::vector<double> cost(size * size, kInfinity);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      cost[i * size + j] = std::max(std::abs(a[i].birth - b[j].birth), std::abs(a[i].death - b[j].death));
    cost[i * size + m + i] = (a[i].death - a[i].birth) / 2.0;
  }
  for (std::size_t j = 0; j < m; ++j) {
    cost[(n + j) * size + j] = (b[j].death - b[j].birth) / 2.0;
    for (std::size_t i = 0; i < n; ++i) cost[(n + j) * size + m + i] = 0.0;
  }
  std::vector<double> values;
  for (double c : cost)
    if (c < kInfinity) values.push_back(c);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const auto perfect = [&](double threshold) {
    std::vector<std::ptrdiff_t> match_right(size, -1);
    for (std::size_t u = 0; u < size; ++u) {
      std::vector<char> seen(size, 0);
      std::function<bool(std::size_t)> augment = [&](std::size_t v) {
        for (std::size_t w = 0; w < size; ++w) {
          if (seen[w] || cost[v * size + w] > threshold) continue;
          seen[w] = 1;
          if (match_right[w] < 0 || augment(static_cast<std::size_t>(match_right[w]))) {
            match_right[w] = static_cast<std::ptrdiff_t>(v);
            return true;
          }
        }
        return false;
      };
      if (!augment(u)) return false;
    }
    return true;
  };
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (perfect(values[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return values[lo];
}

// ---------------------------------------------------------------------------
// Weighted
// ---------------------------------------------------------------------------

namespace {

struct WeightedCells {
  std::vector<IntervalIndex> src, dst;  // weighted intervals of each side
  std::vector<double> a, b;             // their masses
  std::size_t size() const { return src.size() * dst.size(); }
  MatchingCell cell(std::size_t k) const { return {src[k / dst.size()], dst[k % dst.size()]}; }
  std::ptrdiff_t index(const MatchingCell& c) const {
    auto i = std::lower_bound(src.begin(), src.end(), c.first);
    auto j = std::lower_bound(dst.begin(), dst.end(), c.second);
    if (i == src.end() || *i != c.first || j == dst.end() || *j != c.second) return -1;
    return (i - src.begin()) * static_cast<std::ptrdiff_t>(dst.size()) + (j - dst.begin());
  }
};

WeightedCells weighted_cells(const WeightedPersistenceDiagram& s, const WeightedPersistenceDiagram& t) {
  WeightedCells w;
  for (const auto& [iv, mass] : s.weight()) {
    w.src.push_back(iv);
    w.a.push_back(mass);
  }
  for (const auto& [iv, mass] : t.weight()) {
    w.dst.push_back(iv);
    w.b.push_back(mass);
  }
  return w;
}

bool has_anchor(const WeightedPersistenceDiagram& s, const WeightedPersistenceDiagram& t) {
  return s.weight(0, 0) > 0.0 && t.weight(0, 0) > 0.0;
}

// Certificate from the product coupling and the matching through the diagonal at 0.
WeightedMatching trivial_weighted_matching(const WeightedPersistenceDiagram& s, const WeightedPersistenceDiagram& t,
                                           const WeightedCells& cells) {
  WeightedMatching w;
  w.gamma = Matching{s.grid(), t.grid(), {}};
  w.gamma.cells[{{0, 0}, {0, 0}}] = 1;
  for (const auto& [iv, k] : s.diagram().off_diagonal()) w.gamma.cells[{iv, {0, 0}}] += k;
  for (const auto& [iv, k] : t.diagram().off_diagonal()) w.gamma.cells[{{0, 0}, iv}] += k;
  for (std::size_t i = 0; i < cells.src.size(); ++i)
    for (std::size_t j = 0; j < cells.dst.size(); ++j) w.eta[{cells.src[i], cells.dst[j]}] = cells.a[i] * cells.b[j];
  return w;
}

}  // namespace

DistanceResult d_defo_inf_weighted(const WeightedPersistenceDiagram& s, const WeightedPersistenceDiagram& t,
                                   std::size_t cell_cap) {
  DistanceResult res;
  if (!has_anchor(s, t)) {
    // without weight on [0,0] no weighted matching exists
    res.value = kInfinity;
    res.mode = DistanceMode::exact;
    return res;
  }
  const WeightedCells cells = weighted_cells(s, t);
  const CriticalGrid& q = s.grid();
  const CriticalGrid& r = t.grid();
  if (cells.size() > cell_cap) {
    res.weighted = trivial_weighted_matching(s, t, cells);
    res.value = defcost_p(*res.weighted, kInfinity);
    res.mode = DistanceMode::upper_bound;
    return res;
  }
  const std::size_t n = cells.src.size(), m = cells.dst.size();
  std::vector<Shifts> shift(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) shift[k] = shifts_of(q, r, cells.cell(k));

  struct Attempt {
    transport::CellMask mask;
    transport::SupportAnalysis support;
    std::optional<Matching> gamma;
  };
  const auto attempt = [&](double lo, double hi) {
    Attempt at;
    at.mask.assign(cells.size(), 0);
    for (std::size_t k = 0; k < cells.size(); ++k) at.mask[k] = in_window(shift[k], lo, hi);
    at.support = transport::analyze_support(cells.a, cells.b, at.mask);
    if (!at.support.feasible) return at;
    at.gamma = find_matching(s.diagram(), t.diagram(), [&](const MatchingCell& c) {
      const auto k = cells.index(c);
      return k >= 0 && at.support.reachable[static_cast<std::size_t>(k)];
    });
    return at;
  };
  std::vector<double> lows, highs;
  candidate_shifts(q, r, lows, highs);
  const auto window =
      narrowest_window(lows, highs, [&](double lo, double hi) { return attempt(lo, hi).gamma.has_value(); });
  if (!window) throw InternalError("no weighted matching found even for the widest window");
  Attempt best = attempt(window->first, window->second);
  std::vector<std::size_t> required;
  for (const auto& [c, k] : best.gamma->cells) required.push_back(static_cast<std::size_t>(cells.index(c)));
  std::vector<double> plan = best.support.plan;
  if (!transport::make_cells_positive(plan, n, m, best.mask, required))
    throw InternalError("matched cell is not attainable by a coupling");
  WeightedMatching w;
  w.gamma = std::move(*best.gamma);
  for (std::size_t k = 0; k < plan.size(); ++k)
    if (plan[k] > 0.0) w.eta[cells.cell(k)] = plan[k];
  res.value = defcost_p(w, kInfinity);
  if (res.value > window->second - window->first + 1e-9)
    throw InternalError("weighted certificate exceeds the window width");
  res.mode = DistanceMode::exact;
  res.weighted = std::move(w);
  return res;
}

DistanceResult d_defo_p_weighted(const WeightedPersistenceDiagram& s, const WeightedPersistenceDiagram& t, double p,
                                 const FinitePOptions& options) {
  if (is_infinite_p(p) || !(p >= 1.0)) throw ValidationError("d_defo_p_weighted needs a finite p >= 1");
  if (!(options.eps_supp > 0.0 && options.eps_supp < 1.0)) throw ValidationError("eps_supp must lie in (0, 1)");
  DistanceResult res;
  res.mode = DistanceMode::upper_bound;
  if (!has_anchor(s, t)) {
    res.value = kInfinity;
    return res;
  }
  const WeightedCells cells = weighted_cells(s, t);
  const CriticalGrid& q = s.grid();
  const CriticalGrid& r = t.grid();
  const std::size_t total = cells.size();
  std::vector<Interval> src(cells.src.size()), dst(cells.dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) src[i] = interval_of(q, cells.src[i]);
  for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = interval_of(r, cells.dst[j]);
  const std::size_t m = dst.size();
  const auto entry = [&](std::size_t c1, std::size_t c2) {
    const double d = defo(src[c1 / m], src[c2 / m], dst[c1 % m], dst[c2 % m]);
    return d > 0.0 ? std::pow(d, p) : 0.0;
  };

  transport::QuadraticForm form;
  form.rows = src.size();
  form.cols = m;
  std::vector<double> dense;
  if (total <= 2048) {
    dense.resize(total * total);
    for (std::size_t c1 = 0; c1 < total; ++c1)
      for (std::size_t c2 = 0; c2 < total; ++c2) dense[c1 * total + c2] = entry(c1, c2);
    form.apply = [&dense, total](std::span<const double> plan, std::span<double> out) {
      for (std::size_t c = 0; c < total; ++c) {
        double acc = 0.0;
        const double* row = dense.data() + c * total;
        for (std::size_t k = 0; k < total; ++k) acc += row[k] * plan[k];
        out[c] = acc;
      }
    };
  } else {
    form.apply = [&entry, total](std::span<const double> plan, std::span<double> out) {
      for (std::size_t c = 0; c < total; ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < total; ++k)
          if (plan[k] != 0.0) acc += entry(c, k) * plan[k];
        out[c] = acc;
      }
    };
  }
  const auto starts = transport::default_starts(cells.a, cells.b, std::max(1, options.restarts), options.seed);
  const auto best = transport::minimize_quadratic(form, cells.a, cells.b, starts);

  std::vector<double> plan = best.plan;
  WeightedMatching w;
  auto gamma = find_matching(s.diagram(), t.diagram(), [&](const MatchingCell& c) {
    const auto k = cells.index(c);
    return k >= 0 && plan[static_cast<std::size_t>(k)] > 0.0;
  });
  if (gamma) {
    w.gamma = std::move(*gamma);
  } else {
    // Mix in a little of the product coupling so every cell, hence every matching, is supported.
    w = trivial_weighted_matching(s, t, cells);
    for (std::size_t k = 0; k < total; ++k)
      plan[k] = (1.0 - options.eps_supp) * plan[k] + options.eps_supp * cells.a[k / m] * cells.b[k % m];
  }
  w.eta.clear();
  for (std::size_t k = 0; k < total; ++k)
    if (plan[k] > 0.0) w.eta[cells.cell(k)] = plan[k];
  std::vector<double> lm(total);
  form.apply(plan, lm);
  double objective = 0.0;
  for (std::size_t k = 0; k < total; ++k) objective += plan[k] * lm[k];
  res.value = std::pow(std::max(0.0, objective), 1.0 / p);
  res.weighted = std::move(w);
  return res;
}

}  // namespace wpdkit
