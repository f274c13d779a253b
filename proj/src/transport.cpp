#include "wpdkit/transport.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>

#include "wpdkit/common.hpp"

namespace wpdkit::transport {

// ---------------------------------------------------------------------------
// MaxFlow
// ---------------------------------------------------------------------------

MaxFlow::MaxFlow(std::size_t nodes, double eps) : eps_(eps), head_(nodes), level_(nodes), it_(nodes) {}

std::size_t MaxFlow::add_arc(std::size_t from, std::size_t to, double capacity) {
  const std::size_t id = arcs_.size();
  arcs_.push_back({to, capacity, 0.0});
  head_[from].push_back(id);
  arcs_.push_back({from, 0.0, 0.0});
  head_[to].push_back(id + 1);
  return id;
}

bool MaxFlow::bfs(std::size_t s, std::size_t t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<std::size_t> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t id : head_[v]) {
      const Arc& a = arcs_[id];
      if (a.cap - a.flow > eps_ && level_[a.to] < 0) {
        level_[a.to] = level_[v] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[t] >= 0;
}

double MaxFlow::dfs(std::size_t v, std::size_t t, double pushed) {
  if (v == t) return pushed;
  for (std::size_t& i = it_[v]; i < head_[v].size(); ++i) {
    const std::size_t id = head_[v][i];
    Arc& a = arcs_[id];
    if (a.cap - a.flow <= eps_ || level_[a.to] != level_[v] + 1) continue;
    const double got = dfs(a.to, t, std::min(pushed, a.cap - a.flow));
    if (got > eps_) {
      a.flow += got;
      arcs_[id ^ 1].flow -= got;
      return got;
    }
  }
  return 0.0;
}

double MaxFlow::run(std::size_t source, std::size_t sink) {
  double total = 0.0;
  while (bfs(source, sink)) {
    std::fill(it_.begin(), it_.end(), 0);
    while (true) {
      const double got = dfs(source, sink, kInfinity);
      if (got <= eps_) break;
      total += got;
    }
  }
  return total;
}

double MaxFlow::flow(std::size_t arc) const { return arcs_[arc].flow; }

// ---------------------------------------------------------------------------
// Support analysis
// ---------------------------------------------------------------------------

namespace {

// Tarjan SCC on a small dense digraph given as adjacency lists.
std::vector<int> strongly_connected(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  int counter = 0;
  int comps = 0;
  // Iterative DFS frames: (vertex, next edge position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        const std::size_t w = adj[v][pos++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        while (true) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
          if (w == v) break;
        }
        ++comps;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return comp;
}

constexpr double kPositive = 1e-14;

}  // namespace

SupportAnalysis analyze_support(std::span<const double> a, std::span<const double> b, const CellMask& mask,
                                double mass_tol) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  SupportAnalysis out;
  out.reachable.assign(n * m, 0);

  const std::size_t source = n + m;
  const std::size_t sink = n + m + 1;
  MaxFlow flow(n + m + 2);
  for (std::size_t i = 0; i < n; ++i) flow.add_arc(source, i, a[i]);
  for (std::size_t j = 0; j < m; ++j) flow.add_arc(n + j, sink, b[j]);
  std::vector<std::size_t> cell_arc(n * m, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (mask[i * m + j]) cell_arc[i * m + j] = flow.add_arc(i, n + j, kInfinity);

  const double total_a = std::accumulate(a.begin(), a.end(), 0.0);
  const double total_b = std::accumulate(b.begin(), b.end(), 0.0);
  const double value = flow.run(source, sink);
  if (value < std::max(total_a, total_b) - mass_tol) return out;

  out.feasible = true;
  out.plan.assign(n * m, 0.0);
  std::vector<std::vector<std::size_t>> residual(n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!mask[i * m + j]) continue;
      const double f = std::max(0.0, flow.flow(cell_arc[i * m + j]));
      out.plan[i * m + j] = f;
      residual[i].push_back(n + j);
      if (f > kPositive) residual[n + j].push_back(i);
    }
  }
  // A zero cell can be made positive iff it lies on a residual cycle, i.e. its
  // endpoints share a strongly connected component.
  const auto comp = strongly_connected(residual);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (mask[i * m + j] && (out.plan[i * m + j] > kPositive || comp[i] == comp[n + j]))
        out.reachable[i * m + j] = 1;
  return out;
}

bool make_cells_positive(std::vector<double>& plan, std::size_t n, std::size_t m, const CellMask& mask,
                         std::span<const std::size_t> required) {
  for (std::size_t cell : required) {
    if (plan[cell] > kPositive) continue;
    if (!mask[cell]) return false;
    const std::size_t row = cell / m;
    const std::size_t col = cell % m;
    // BFS from column `col` back to row `row`: column j -> row i when plan(i,j) > 0,
    // row i -> column j when (i,j) admissible.
    const std::size_t nodes = n + m;
    std::vector<std::ptrdiff_t> parent(nodes, -1);
    std::vector<char> seen(nodes, 0);
    std::queue<std::size_t> q;
    q.push(n + col);
    seen[n + col] = 1;
    while (!q.empty() && !seen[row]) {
      const std::size_t v = q.front();
      q.pop();
      if (v >= n) {
        const std::size_t j = v - n;
        for (std::size_t i = 0; i < n; ++i)
          if (!seen[i] && plan[i * m + j] > kPositive) {
            seen[i] = 1;
            parent[i] = static_cast<std::ptrdiff_t>(v);
            q.push(i);
          }
      } else {
        for (std::size_t j = 0; j < m; ++j)
          if (!seen[n + j] && mask[v * m + j]) {
            seen[n + j] = 1;
            parent[n + j] = static_cast<std::ptrdiff_t>(v);
            q.push(n + j);
          }
      }
    }
    if (!seen[row]) return false;
    // Path col -> ... -> row alternates (col_j -> row_i: decrease plan(i,j)),
    // (row_i -> col_j: increase plan(i,j)); closing arc row -> col increases `cell`.
    std::vector<std::pair<std::size_t, int>> changes;  // (cell index, +1/-1)
    double bottleneck = kInfinity;
    std::size_t v = row;
    while (v != n + col) {
      const auto u = static_cast<std::size_t>(parent[v]);
      if (u >= n) {  // column u-n -> row v : decrease
        const std::size_t c = v * m + (u - n);
        changes.push_back({c, -1});
        bottleneck = std::min(bottleneck, plan[c]);
      } else {  // row u -> column v-n : increase
        changes.push_back({u * m + (v - n), +1});
      }
      v = u;
    }
    const double delta = 0.5 * bottleneck;
    plan[cell] += delta;
    for (const auto& [c, sign] : changes) plan[c] += sign * delta;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Linear transportation
// ---------------------------------------------------------------------------

std::vector<double> solve_transport(std::span<const double> cost, std::span<const double> a,
                                    std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  constexpr double eps = 1e-15;
  std::vector<double> plan(n * m, 0.0);
  std::vector<double> supply(a.begin(), a.end());
  std::vector<double> demand(b.begin(), b.end());

  // Bellman-Ford shortest augmenting paths on the residual bipartite graph.
  // Nodes: rows 0..n-1, columns n..n+m-1. Forward arcs row->col always exist
  // (cost c), backward arcs col->row exist when plan > 0 (cost -c).
  while (true) {
    double remaining = 0.0;
    for (double s : supply) remaining += s;
    if (remaining <= 1e-14) break;

    std::vector<double> dist(n + m, kInfinity);
    std::vector<std::ptrdiff_t> parent(n + m, -1);
    for (std::size_t i = 0; i < n; ++i)
      if (supply[i] > eps) dist[i] = 0.0;
    for (std::size_t round = 0; round < n + m; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] == kInfinity) continue;
        for (std::size_t j = 0; j < m; ++j) {
          const double nd = dist[i] + cost[i * m + j];
          if (nd < dist[n + j] - 1e-15) {
            dist[n + j] = nd;
            parent[n + j] = static_cast<std::ptrdiff_t>(i);
            changed = true;
          }
        }
      }
      for (std::size_t j = 0; j < m; ++j) {
        if (dist[n + j] == kInfinity) continue;
        for (std::size_t i = 0; i < n; ++i) {
          if (plan[i * m + j] <= eps) continue;
          const double nd = dist[n + j] - cost[i * m + j];
          if (nd < dist[i] - 1e-15) {
            dist[i] = nd;
            parent[i] = static_cast<std::ptrdiff_t>(n + j);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::size_t target = n + m;
    for (std::size_t j = 0; j < m; ++j)
      if (demand[j] > eps && dist[n + j] < kInfinity && (target == n + m || dist[n + j] < dist[target]))
        target = n + j;
    if (target == n + m) break;

    // Walk back to a source row, collecting the bottleneck.
    double amount = demand[target - n];
    std::size_t v = target;
    std::size_t steps = 0;
    while (parent[v] >= 0 && steps++ <= n + m) {
      const auto u = static_cast<std::size_t>(parent[v]);
      if (u >= n) amount = std::min(amount, plan[v * m + (u - n)]);
      v = u;
    }
    if (parent[v] >= 0) throw InternalError("solve_transport: negative residual cycle");
    amount = std::min(amount, supply[v]);
    if (amount <= eps) break;
    supply[v] -= amount;
    demand[target - n] -= amount;
    v = target;
    while (parent[v] >= 0) {
      const auto u = static_cast<std::size_t>(parent[v]);
      if (u >= n)
        plan[v * m + (u - n)] -= amount;
      else
        plan[u * m + (v - n)] += amount;
      v = u;
    }
  }
  for (double& x : plan) x = std::max(0.0, x);
  return plan;
}

std::vector<double> northwest_corner(std::span<const double> a, std::span<const double> b,
                                     std::span<const std::size_t> row_order,
                                     std::span<const std::size_t> col_order) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> plan(n * m, 0.0);
  std::vector<double> supply(a.begin(), a.end());
  std::vector<double> demand(b.begin(), b.end());
  std::size_t r = 0, c = 0;
  while (r < n && c < m) {
    const std::size_t i = row_order[r];
    const std::size_t j = col_order[c];
    const double x = std::min(supply[i], demand[j]);
    plan[i * m + j] += x;
    supply[i] -= x;
    demand[j] -= x;
    if (supply[i] <= demand[j]) {
      ++r;
    } else {
      ++c;
    }
  }
  return plan;
}

std::vector<std::vector<double>> default_starts(std::span<const double> a, std::span<const double> b,
                                                int restarts, std::uint64_t seed) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<double>> starts;
  std::vector<double> product(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) product[i * m + j] = a[i] * b[j];
  starts.push_back(std::move(product));

  std::vector<std::size_t> rows(n), cols(m);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::mt19937_64 rng(seed);
  for (int k = 1; k < restarts; ++k) {
    if (k > 1) {
      std::shuffle(rows.begin(), rows.end(), rng);
      std::shuffle(cols.begin(), cols.end(), rng);
    }
    starts.push_back(northwest_corner(a, b, rows, cols));
  }
  return starts;
}

// ---------------------------------------------------------------------------
// Frank-Wolfe
// ---------------------------------------------------------------------------

namespace {

double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

FrankWolfeResult run_single(const QuadraticForm& form, std::span<const double> a, std::span<const double> b,
                            std::vector<double> plan, const FrankWolfeOptions& options) {
  const std::size_t cells = form.rows * form.cols;
  std::vector<double> lp(cells), ld(cells), dir(cells);
  form.apply(plan, lp);
  double objective = dot(plan, lp);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    // Gradient is 2 L P; the LP vertex only needs L P.
    const std::vector<double> vertex = solve_transport(lp, a, b);
    for (std::size_t c = 0; c < cells; ++c) dir[c] = vertex[c] - plan[c];
    const double slope = 2.0 * dot(lp, dir);
    if (-slope <= options.gap_tolerance) break;
    form.apply(dir, ld);
    const double curvature = dot(dir, ld);
    double step = 1.0;
    if (curvature > 0.0) step = std::clamp(-slope / (2.0 * curvature), 0.0, 1.0);
    const double predicted = objective + step * slope + step * step * curvature;
    if (predicted >= objective - 1e-18) break;
    for (std::size_t c = 0; c < cells; ++c) {
      plan[c] += step * dir[c];
      lp[c] += step * ld[c];
    }
    objective = predicted;
  }
  for (double& x : plan) x = std::max(0.0, x);
  form.apply(plan, lp);
  const double final_objective = std::max(0.0, dot(plan, lp));
  return {std::move(plan), final_objective};
}

}  // namespace

FrankWolfeResult minimize_quadratic(const QuadraticForm& form, std::span<const double> a,
                                    std::span<const double> b, const std::vector<std::vector<double>>& starts,
                                    const FrankWolfeOptions& options) {
  if (starts.empty()) throw std::invalid_argument("minimize_quadratic: no starting couplings");
  std::vector<FrankWolfeResult> results(starts.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(max_threads(), static_cast<unsigned>(starts.size())));
  if (workers <= 1) {
    for (std::size_t k = 0; k < starts.size(); ++k) results[k] = run_single(form, a, b, starts[k], options);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t k = w; k < starts.size(); k += workers)
          results[k] = run_single(form, a, b, starts[k], options);
      }));
    }
    for (auto& j : jobs) j.get();
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k)
    if (results[k].objective < results[best].objective) best = k;
  return std::move(results[best]);
}

}  // namespace wpdkit::transport
