#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "localflow/sparse.hpp"

namespace localflow {

using SourceFunction = SparseVector<VertexId>;
using Flow = SparseVector<EdgeId>;

/// One entry of a vertex's adjacency list. sign is +1 when the vertex is the
/// tail of the oriented edge and -1 when it is the head, i.e. the entry of the
/// incidence matrix at (vertex, edge).
struct Incidence {
  EdgeId edge;
  std::int32_t sign;
};

class GraphError : public std::invalid_argument {
 public:
  GraphError(const std::string& what, std::int64_t edge_index)
      : std::invalid_argument(what), edge_index_(edge_index) {}
  std::int64_t edge_index() const { return edge_index_; }

 private:
  std::int64_t edge_index_;
};

/// Immutable unit-capacity undirected multigraph. Edge orientations are the
/// input order of endpoints. Adjacency is packed CSR-style: the incidences of
/// vertex v live in [offsets[v], offsets[v+1]) in ascending edge id.
class Graph {
 public:
  /// Throws GraphError naming the offending edge on a self-loop or an
  /// out-of-range endpoint.
  static Graph build(std::int64_t n, std::span<const std::pair<VertexId, VertexId>> edges);
  static Graph build(std::int64_t n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
    return build(n, std::span<const std::pair<VertexId, VertexId>>(edges));
  }

  VertexId vertex_count() const { return n_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(tails_.size()); }

  VertexId tail(EdgeId e) const { return tails_[e]; }
  VertexId head(EdgeId e) const { return heads_[e]; }
  VertexId other(EdgeId e, VertexId v) const { return tails_[e] == v ? heads_[e] : tails_[e]; }

  std::int32_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const Incidence> incidences(VertexId v) const {
    return {incidences_.data() + offsets_[v], static_cast<std::size_t>(degree(v))};
  }

  bool contains_vertex(std::int64_t v) const { return v >= 0 && v < n_; }

 private:
  VertexId n_ = 0;
  std::vector<VertexId> tails_;
  std::vector<VertexId> heads_;
  std::vector<std::int32_t> offsets_;
  std::vector<Incidence> incidences_;
};

/// Number of edges with exactly one endpoint in s. Duplicates in s are ignored.
std::int64_t boundary_size(const Graph& g, std::span<const VertexId> s);

/// Sum of degrees over s. Duplicates in s are ignored.
std::int64_t volume(const Graph& g, std::span<const VertexId> s);

/// Bf: each edge (u, v) adds f(e) at u and subtracts it at v.
SourceFunction apply_incidence(const Graph& g, const Flow& f);

}  // namespace localflow
