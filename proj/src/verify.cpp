#include "localflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace localflow {

VerifyReport verify_cut_certificate(const Graph& g, const SourceFunction& b,
                                    std::span<const VertexId> s) {
  VerifyReport report;
  std::unordered_set<VertexId> members;
  for (VertexId v : s) {
    if (!g.contains_vertex(v)) {
      report.fail({"vertex-range", "vertex " + std::to_string(v), static_cast<double>(v),
                   static_cast<double>(g.vertex_count())});
      return report;
    }
    members.insert(v);
  }
  double b_of_s = 0.0;
  std::int64_t boundary = 0;
  for (VertexId v : members) {
    b_of_s += b.get(v);
    for (const Incidence& inc : g.incidences(v)) {
      if (!members.count(g.other(inc.edge, v))) ++boundary;
    }
  }
  if (!(std::abs(b_of_s) > static_cast<double>(boundary))) {
    report.fail({"cut", "|b(S)| vs boundary", std::abs(b_of_s), static_cast<double>(boundary)});
  }
  return report;
}

VerifyReport verify_potential_certificate(const Graph& g, const KSource& b, const PotentialMatrix& phi) {
  VerifyReport report;
  std::unordered_map<VertexId, std::vector<std::pair<std::int32_t, double>>> by_vertex;
  double lhs = 0.0;
  for (const auto& [key, value] : phi) {
    const auto [v, j] = key;
    if (!g.contains_vertex(v) || j < 0 || static_cast<std::size_t>(j) >= b.k()) {
      report.fail({"index-range", "(" + std::to_string(v) + ", " + std::to_string(j) + ")", 0, 0});
      return report;
    }
    by_vertex[v].emplace_back(j, value);
    lhs += value * b[static_cast<std::size_t>(j)].get(v);
  }
  auto potential = [&](VertexId v, std::int32_t j) {
    auto it = phi.find({v, j});
    return it == phi.end() ? 0.0 : it->second;
  };
  double rhs = 0.0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const VertexId u = g.tail(e);
    const VertexId v = g.head(e);
    double best = 0.0;
    for (const VertexId end : {u, v}) {
      auto it = by_vertex.find(end);
      if (it == by_vertex.end()) continue;
      for (const auto& [j, unused] : it->second) {
        best = std::max(best, std::abs(potential(u, j) - potential(v, j)));
      }
    }
    rhs += best;
  }
  if (!(lhs > rhs)) report.fail({"potential", "<phi, b> vs max flow term", lhs, rhs});
  return report;
}

VerifyReport verify_flow_output(const Graph& g, const KSource& b, const KFlow& f, double eps) {
  VerifyReport report;
  if (f.k() != b.k()) {
    report.fail({"commodity-count", "k", static_cast<double>(f.k()), static_cast<double>(b.k())});
    return report;
  }
  std::map<EdgeId, double> load;
  for (std::size_t j = 0; j < f.k(); ++j) {
    for (const auto& [e, value] : f[j]) {
      if (e < 0 || e >= g.edge_count()) {
        report.fail({"edge-range", "commodity " + std::to_string(j + 1) + " edge " + std::to_string(e),
                     static_cast<double>(e), static_cast<double>(g.edge_count())});
        return report;
      }
      load[e] += std::abs(value);
    }
  }
  for (const auto& [e, l] : load) {
    if (!(l <= 1.0 + 1e-9)) report.fail({"congestion", "edge " + std::to_string(e), l, 1.0});
  }
  for (std::size_t j = 0; j < b.k(); ++j) {
    for (const auto& [v, unused] : b[j]) {
      if (!g.contains_vertex(v)) {
        report.fail({"vertex-range", "commodity " + std::to_string(j + 1) + " vertex " + std::to_string(v),
                     static_cast<double>(v), static_cast<double>(g.vertex_count())});
        return report;
      }
    }
    const SourceFunction r = residual(g, b[j], f[j]);
    for (const auto& [v, value] : r) {
      const double bound = eps * g.degree(v) + 1e-9;
      if (!(std::abs(value) <= bound)) {
        report.fail({"residual",
                     "commodity " + std::to_string(j + 1) + " vertex " + std::to_string(v),
                     std::abs(value), bound});
      }
    }
  }
  return report;
}

namespace {

// Edmonds-Karp on an adjacency-list residual network.
class AugmentingPathMaxFlow {
 public:
  explicit AugmentingPathMaxFlow(std::size_t nodes) : adj_(nodes) {}

  void add_arc(std::size_t from, std::size_t to, std::int64_t capacity) {
    adj_[from].push_back(arcs_.size());
    arcs_.push_back({to, capacity});
    adj_[to].push_back(arcs_.size());
    arcs_.push_back({from, 0});
  }

  void add_undirected(std::size_t a, std::size_t b, std::int64_t capacity) {
    adj_[a].push_back(arcs_.size());
    arcs_.push_back({b, capacity});
    adj_[b].push_back(arcs_.size());
    arcs_.push_back({a, capacity});
  }

  std::int64_t run(std::size_t source, std::size_t sink) {
    std::int64_t total = 0;
    std::vector<std::size_t> via(adj_.size());
    while (true) {
      std::vector<bool> seen(adj_.size(), false);
      std::queue<std::size_t> frontier;
      frontier.push(source);
      seen[source] = true;
      while (!frontier.empty() && !seen[sink]) {
        const std::size_t x = frontier.front();
        frontier.pop();
        for (std::size_t a : adj_[x]) {
          const Arc& arc = arcs_[a];
          if (arc.residual > 0 && !seen[arc.to]) {
            seen[arc.to] = true;
            via[arc.to] = a;
            frontier.push(arc.to);
          }
        }
      }
      if (!seen[sink]) return total;
      std::int64_t push = std::numeric_limits<std::int64_t>::max();
      for (std::size_t x = sink; x != source; x = arcs_[via[x] ^ 1].to) {
        push = std::min(push, arcs_[via[x]].residual);
      }
      for (std::size_t x = sink; x != source; x = arcs_[via[x] ^ 1].to) {
        arcs_[via[x]].residual -= push;
        arcs_[via[x] ^ 1].residual += push;
      }
      total += push;
    }
  }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t residual;
  };
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
};

}  // namespace

bool oracle_feasible_single(const Graph& g, const SourceFunction& b, std::int64_t scale) {
  if (scale < 1) throw std::invalid_argument("scale must be >= 1");
  if (!is_balanced(b)) throw std::invalid_argument("oracle requires a balanced demand");
  const std::size_t n = static_cast<std::size_t>(g.vertex_count());
  const std::size_t source = n;
  const std::size_t sink = n + 1;
  AugmentingPathMaxFlow network(n + 2);
  std::int64_t supply = 0;
  for (const auto& [v, value] : b) {
    const double scaled = value * static_cast<double>(scale);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-9) {
      throw std::invalid_argument("scale * b(" + std::to_string(v) + ") is not integral");
    }
    const auto cap = static_cast<std::int64_t>(rounded);
    if (cap > 0) {
      network.add_arc(source, static_cast<std::size_t>(v), cap);
      supply += cap;
    } else if (cap < 0) {
      network.add_arc(static_cast<std::size_t>(v), sink, -cap);
    }
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    network.add_undirected(static_cast<std::size_t>(g.tail(e)), static_cast<std::size_t>(g.head(e)), scale);
  }
  return network.run(source, sink) == supply;
}

}  // namespace localflow
