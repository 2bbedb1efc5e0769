#include "localflow/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace localflow {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below needs a positive bound");
  // Rejection sampling over the largest multiple of bound.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

Graph path_graph(std::int64_t n) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::int64_t v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::build(n, edges);
}

Graph grid_graph(std::int64_t rows, std::int64_t cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid needs rows, cols >= 1");
  std::vector<std::pair<VertexId, VertexId>> edges;
  auto id = [cols](std::int64_t r, std::int64_t c) { return static_cast<VertexId>(r * cols + c); };
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return Graph::build(rows * cols, edges);
}

Graph random_regular_graph(std::int64_t n, std::int64_t d, std::uint64_t seed) {
  if (n < 2 || d < 1 || d >= n || (n * d) % 2 != 0) {
    throw std::invalid_argument("random regular graph needs 1 <= d < n and n*d even");
  }
  Rng rng(seed);
  std::vector<VertexId> stubs;
  stubs.reserve(static_cast<std::size_t>(n * d));
  for (std::int64_t v = 0; v < n; ++v) {
    for (std::int64_t i = 0; i < d; ++i) stubs.push_back(static_cast<VertexId>(v));
  }
  rng.shuffle(stubs);
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(stubs.size() / 2);
  std::vector<std::size_t> loops;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    if (stubs[i] == stubs[i + 1]) loops.push_back(edges.size());
    edges.emplace_back(stubs[i], stubs[i + 1]);
  }
  // Rewire (a, a) and (c, d) into (a, c) and (a, d); degrees are unchanged.
  for (std::size_t attempts = 0; !loops.empty(); ++attempts) {
    if (attempts > 1000 * edges.size()) throw std::runtime_error("could not remove self-loops");
    const std::size_t p = loops.back();
    const std::size_t q = static_cast<std::size_t>(rng.below(edges.size()));
    const VertexId a = edges[p].first;
    const auto [c, e] = edges[q];
    if (q == p || c == a || e == a || c == e) continue;
    edges[p] = {a, c};
    edges[q] = {a, e};
    loops.pop_back();
  }
  return Graph::build(n, edges);
}

Graph random_gnm_graph(std::int64_t n, std::int64_t m, std::uint64_t seed) {
  if (n < 1 || m < 0 || m > n * (n - 1) / 2) throw std::invalid_argument("G(n, m) needs 0 <= m <= n(n-1)/2");
  Rng rng(seed);
  std::unordered_set<std::uint64_t> used;
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  while (static_cast<std::int64_t>(edges.size()) < m) {
    const auto u = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(n)));
    const auto v = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(n)));
    if (u == v) continue;
    const std::uint64_t key = static_cast<std::uint64_t>(std::min(u, v)) * static_cast<std::uint64_t>(n) +
                              static_cast<std::uint64_t>(std::max(u, v));
    if (!used.insert(key).second) continue;
    edges.emplace_back(u, v);
  }
  return Graph::build(n, edges);
}

KSource pairs_demand(std::span<const DemandPair> pairs, std::size_t min_k) {
  std::size_t k = min_k;
  for (const auto& p : pairs) {
    if (p.commodity < 1) throw std::invalid_argument("commodities are 1-based");
    k = std::max(k, static_cast<std::size_t>(p.commodity));
  }
  KSource b(k);
  for (const auto& p : pairs) {
    if (p.source == p.target) continue;
    b[static_cast<std::size_t>(p.commodity - 1)].add(p.source, p.amount);
    b[static_cast<std::size_t>(p.commodity - 1)].add(p.target, -p.amount);
  }
  return b;
}

namespace {

// Splits total over caps proportionally to random weights, clamping at caps.
std::vector<double> split_under_caps(double total, const std::vector<double>& caps, Rng& rng) {
  const double capacity = std::accumulate(caps.begin(), caps.end(), 0.0);
  if (total > capacity) throw std::invalid_argument("requested l1 exceeds the degree budget");
  std::vector<double> weight(caps.size());
  for (double& w : weight) w = rng.uniform(1.0, 2.0);
  std::vector<double> out(caps.size(), 0.0);
  std::vector<bool> clamped(caps.size(), false);
  double remaining = total;
  while (true) {
    double free_weight = 0.0;
    for (std::size_t i = 0; i < caps.size(); ++i) {
      if (!clamped[i]) free_weight += weight[i];
    }
    bool changed = false;
    for (std::size_t i = 0; i < caps.size(); ++i) {
      if (clamped[i]) continue;
      out[i] = remaining * weight[i] / free_weight;
      if (out[i] > caps[i]) {
        out[i] = caps[i];
        clamped[i] = true;
        remaining -= caps[i];
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
  return out;
}

}  // namespace

SourceFunction random_balanced_demand(const Graph& g, std::size_t l0, double l1, Rng& rng) {
  SourceFunction b;
  if (l0 == 0) {
    if (l1 != 0.0) throw std::invalid_argument("l1 > 0 needs l0 >= 2");
    return b;
  }
  if (l0 < 2) throw std::invalid_argument("a balanced demand needs l0 >= 2");
  if (!(l1 > 0.0)) throw std::invalid_argument("l1 must be positive when l0 > 0");
  std::int64_t usable = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) usable += g.degree(v) > 0;
  if (static_cast<std::int64_t>(l0) > usable) throw std::invalid_argument("l0 exceeds the non-isolated vertices");

  std::vector<VertexId> chosen;
  std::unordered_set<VertexId> seen;
  while (chosen.size() < l0) {
    const auto v = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(g.vertex_count())));
    if (g.degree(v) == 0 || !seen.insert(v).second) continue;
    chosen.push_back(v);
  }
  const std::size_t sources = (l0 + 1) / 2;
  const std::vector<VertexId> pos(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(sources));
  const std::vector<VertexId> neg(chosen.begin() + static_cast<std::ptrdiff_t>(sources), chosen.end());
  auto fill = [&](const std::vector<VertexId>& side, double sign) {
    std::vector<double> caps;
    for (VertexId v : side) caps.push_back(g.degree(v));
    std::vector<double> values = split_under_caps(l1 / 2.0, caps, rng);
    // Exact side total: the last free entry absorbs the rounding.
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) partial += values[i];
    if (l1 / 2.0 - partial <= caps.back()) values.back() = l1 / 2.0 - partial;
    for (std::size_t i = 0; i < side.size(); ++i) b.set(side[i], sign * values[i]);
  };
  fill(pos, +1.0);
  fill(neg, -1.0);
  return b;
}

KSource random_routed_demand(const Graph& g, std::size_t k, std::size_t walks, double amount,
                             std::int64_t max_length, Rng& rng) {
  if (!(amount > 0.0 && amount <= 1.0)) throw std::invalid_argument("walk amount must lie in (0, 1]");
  std::vector<std::unordered_map<EdgeId, double>> flow(k);
  std::unordered_map<EdgeId, double> load;
  auto load_after = [&](std::size_t j, EdgeId e, double delta) {
    const double before = flow[j].count(e) ? flow[j][e] : 0.0;
    return (load.count(e) ? load[e] : 0.0) - std::abs(before) + std::abs(before + delta);
  };
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t w = 0; w < walks; ++w) {
      auto v = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(g.vertex_count())));
      const auto length = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_length)));
      for (std::int64_t step = 0; step < length && g.degree(v) > 0; ++step) {
        const auto incs = g.incidences(v);
        const Incidence inc = incs[rng.below(incs.size())];
        const double delta = inc.sign * amount;  // leaving v along the edge
        const double after = load_after(j, inc.edge, delta);
        if (after > 1.0 + 1e-12) break;
        flow[j][inc.edge] += delta;
        load[inc.edge] = after;
        v = g.other(inc.edge, v);
      }
    }
  }
  KSource b(k);
  for (std::size_t j = 0; j < k; ++j) {
    // Ascending edge order keeps the float sums reproducible.
    std::vector<std::pair<EdgeId, double>> ordered(flow[j].begin(), flow[j].end());
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [e, value] : ordered) {
      b[j].add(g.tail(e), value);
      b[j].add(g.head(e), -value);
    }
  }
  return b;
}

}  // namespace localflow
