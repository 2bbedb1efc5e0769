#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the solver code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "localflow/graph.hpp"

namespace localflow::oracle {

/// Linear scan for the smallest T with alpha^2 T >= ln(J (1 + 1.5 T max(a, 1))).
inline std::int64_t iterations_by_scan(double alpha, double index_count, double approx_bound) {
  const double a = std::max(approx_bound, 1.0);
  for (std::int64_t t = 1;; ++t) {
    const double td = static_cast<double>(t);
    if (alpha * alpha * td >= std::log(index_count * (1.0 + 1.5 * td * a))) return t;
  }
}

/// Dense incidence matrix rows: B[v][e].
inline std::vector<std::vector<int>> dense_incidence(std::int64_t n,
                                                     const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<std::vector<int>> b(static_cast<std::size_t>(n), std::vector<int>(edges.size(), 0));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    b[static_cast<std::size_t>(edges[e].first)][e] += 1;
    b[static_cast<std::size_t>(edges[e].second)][e] -= 1;
  }
  return b;
}

/// delta(S) straight from the edge list.
inline std::int64_t boundary_by_edges(const std::vector<std::pair<VertexId, VertexId>>& edges,
                                      const std::vector<bool>& in_s) {
  std::int64_t count = 0;
  for (const auto& [u, v] : edges) count += in_s[static_cast<std::size_t>(u)] != in_s[static_cast<std::size_t>(v)];
  return count;
}

/// Single-commodity feasibility of a balanced b by enumerating all 2^n cuts:
/// for undirected unit capacities b is routable iff |b(S)| <= delta(S) for
/// every S. Only for n <= ~16.
inline bool feasible_by_cut_enumeration(std::int64_t n, const std::vector<std::pair<VertexId, VertexId>>& edges,
                                        const std::vector<double>& b) {
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask + 1 < subsets; ++mask) {
    std::vector<bool> in_s(static_cast<std::size_t>(n));
    double bs = 0.0;
    for (std::int64_t v = 0; v < n; ++v) {
      in_s[static_cast<std::size_t>(v)] = (mask >> v) & 1;
      if (in_s[static_cast<std::size_t>(v)]) bs += b[static_cast<std::size_t>(v)];
    }
    if (std::abs(bs) > static_cast<double>(boundary_by_edges(edges, in_s)) + 1e-9) return false;
  }
  return true;
}

}  // namespace localflow::oracle
