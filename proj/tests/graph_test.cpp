#include <random>

#include "doctest.h"
#include "localflow/generators.hpp"
#include "localflow/graph.hpp"
#include "oracles.hpp"

using namespace localflow;

namespace {

Graph triangle() { return Graph::build(3, {{0, 1}, {1, 2}, {2, 0}}); }

}  // namespace

TEST_CASE("build_graph keeps orientation and degrees") {
  const Graph single = Graph::build(2, {{0, 1}});
  CHECK(single.edge_count() == 1);
  CHECK(single.degree(0) == 1);
  CHECK(single.degree(1) == 1);
  CHECK(single.tail(0) == 0);
  CHECK(single.head(0) == 1);

  const Graph tri = triangle();
  CHECK(tri.edge_count() == 3);
  for (VertexId v = 0; v < 3; ++v) CHECK(tri.degree(v) == 2);
  CHECK(tri.tail(2) == 2);
  CHECK(tri.head(2) == 0);
}

TEST_CASE("build_graph rejects self-loops and bad endpoints with the edge index") {
  try {
    Graph::build(2, {{0, 0}});
    FAIL("self-loop accepted");
  } catch (const GraphError& err) {
    CHECK(err.edge_index() == 0);
  }
  try {
    Graph::build(3, {{0, 1}, {1, 3}});
    FAIL("out-of-range endpoint accepted");
  } catch (const GraphError& err) {
    CHECK(err.edge_index() == 1);
  }
  CHECK_THROWS_AS(Graph::build(3, {{0, 1}, {-1, 2}}), GraphError);
}

TEST_CASE("parallel edges are distinct ids") {
  const Graph g = Graph::build(2, {{0, 1}, {1, 0}, {0, 1}});
  CHECK(g.edge_count() == 3);
  CHECK(g.degree(0) == 3);
  const std::vector<VertexId> s{0};
  CHECK(boundary_size(g, s) == 3);
}

TEST_CASE("adjacency index mirrors the incidence matrix") {
  const auto g = random_gnm_graph(30, 80, 11);
  std::int64_t total_degree = 0;
  std::vector<int> plus(static_cast<std::size_t>(g.edge_count()), 0);
  std::vector<int> minus(static_cast<std::size_t>(g.edge_count()), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    total_degree += g.degree(v);
    EdgeId last = -1;
    for (const Incidence& inc : g.incidences(v)) {
      CHECK(inc.edge > last);  // ascending edge id
      last = inc.edge;
      if (inc.sign > 0) {
        CHECK(g.tail(inc.edge) == v);
        ++plus[static_cast<std::size_t>(inc.edge)];
      } else {
        CHECK(g.head(inc.edge) == v);
        ++minus[static_cast<std::size_t>(inc.edge)];
      }
    }
  }
  CHECK(total_degree == 2 * g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    CHECK(plus[static_cast<std::size_t>(e)] == 1);
    CHECK(minus[static_cast<std::size_t>(e)] == 1);
  }
}

TEST_CASE("boundary_size") {
  const Graph tri = triangle();
  CHECK(boundary_size(tri, std::vector<VertexId>{0}) == 2);
  CHECK(boundary_size(tri, std::vector<VertexId>{0, 1, 2}) == 0);
  const Graph path = path_graph(3);
  CHECK(boundary_size(path, std::vector<VertexId>{1}) == 2);
}

TEST_CASE("volume") {
  CHECK(volume(triangle(), std::vector<VertexId>{0, 1}) == 4);
  CHECK(volume(triangle(), std::vector<VertexId>{}) == 0);
  CHECK(volume(Graph::build(2, {{0, 1}}), std::vector<VertexId>{0, 1}) == 2);
}

TEST_CASE("apply_incidence sign convention") {
  const Graph single = Graph::build(2, {{0, 1}});
  const SourceFunction bf = apply_incidence(single, Flow{{0, 1.0}});
  CHECK(bf.size() == 2);
  CHECK(bf.get(0) == 1.0);
  CHECK(bf.get(1) == -1.0);
  CHECK(apply_incidence(single, Flow{}).empty());
  // Circulation around the triangle: every column of B sums to zero row-wise.
  CHECK(apply_incidence(triangle(), Flow{{0, 1.0}, {1, 1.0}, {2, 1.0}}).empty());
}

TEST_CASE("property: apply_incidence matches the dense matrix, is linear and sums to zero") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng.below(15));
    const std::int64_t m = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n * (n - 1) / 2) + 1));
    const Graph g = random_gnm_graph(n, m, rng.next());
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (EdgeId e = 0; e < g.edge_count(); ++e) edges.emplace_back(g.tail(e), g.head(e));
    const auto dense = oracle::dense_incidence(n, edges);

    Flow f;
    Flow h;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (rng.below(2)) f.set(e, rng.uniform(-1, 1));
      if (rng.below(2)) h.set(e, rng.uniform(-1, 1));
    }
    const SourceFunction bf = apply_incidence(g, f);
    double total = 0.0;
    for (VertexId v = 0; v < n; ++v) {
      double expect = 0.0;
      for (EdgeId e = 0; e < g.edge_count(); ++e) expect += dense[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)] * f.get(e);
      CHECK(bf.get(v) == doctest::Approx(expect).epsilon(1e-12));
      total += bf.get(v);
    }
    CHECK(std::abs(total) < 1e-12);

    const SourceFunction lhs = apply_incidence(g, f + h);
    const SourceFunction rhs = apply_incidence(g, f) + apply_incidence(g, h);
    for (VertexId v = 0; v < n; ++v) CHECK(std::abs(lhs.get(v) - rhs.get(v)) < 1e-12);

    std::vector<VertexId> s;
    std::vector<VertexId> complement;
    std::vector<bool> in_s(static_cast<std::size_t>(n));
    for (VertexId v = 0; v < n; ++v) {
      in_s[static_cast<std::size_t>(v)] = rng.below(2);
      (in_s[static_cast<std::size_t>(v)] ? s : complement).push_back(v);
    }
    CHECK(boundary_size(g, s) == boundary_size(g, complement));
    CHECK(boundary_size(g, s) == oracle::boundary_by_edges(edges, in_s));
  }
}
