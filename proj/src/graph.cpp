#include "localflow/graph.hpp"

#include <limits>
#include <unordered_set>

namespace localflow {

Graph Graph::build(std::int64_t n, std::span<const std::pair<VertexId, VertexId>> edges) {
  if (n < 1 || n > std::numeric_limits<VertexId>::max() - 1) {
    throw GraphError("vertex count out of range: " + std::to_string(n), -1);
  }
  if (edges.size() > static_cast<std::size_t>(std::numeric_limits<EdgeId>::max())) {
    throw GraphError("too many edges", -1);
  }
  Graph g;
  g.n_ = static_cast<VertexId>(n);
  g.tails_.reserve(edges.size());
  g.heads_.reserve(edges.size());
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (!g.contains_vertex(u) || !g.contains_vertex(v)) {
      throw GraphError("edge " + std::to_string(i) + " has an endpoint outside [0, " +
                           std::to_string(n) + ")",
                       static_cast<std::int64_t>(i));
    }
    if (u == v) {
      throw GraphError("edge " + std::to_string(i) + " is a self-loop at vertex " +
                           std::to_string(u),
                       static_cast<std::int64_t>(i));
    }
    g.tails_.push_back(u);
    g.heads_.push_back(v);
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t v = 0; v < static_cast<std::size_t>(n); ++v) g.offsets_[v + 1] += g.offsets_[v];

  g.incidences_.resize(2 * edges.size());
  std::vector<std::int32_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    g.incidences_[cursor[g.tails_[e]]++] = {e, +1};
    g.incidences_[cursor[g.heads_[e]]++] = {e, -1};
  }
  return g;
}

std::int64_t boundary_size(const Graph& g, std::span<const VertexId> s) {
  const std::unordered_set<VertexId> members(s.begin(), s.end());
  std::int64_t boundary = 0;
  for (VertexId v : members) {
    for (const Incidence& inc : g.incidences(v)) {
      if (!members.count(g.other(inc.edge, v))) ++boundary;
    }
  }
  return boundary;
}

std::int64_t volume(const Graph& g, std::span<const VertexId> s) {
  const std::unordered_set<VertexId> members(s.begin(), s.end());
  std::int64_t vol = 0;
  for (VertexId v : members) vol += g.degree(v);
  return vol;
}

SourceFunction apply_incidence(const Graph& g, const Flow& f) {
  SourceFunction out;
  for (const auto& [e, value] : f) {
    out.add(g.tail(e), value);
    out.add(g.head(e), -value);
  }
  return out;
}

}  // namespace localflow
