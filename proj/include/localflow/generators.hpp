#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "localflow/flow_model.hpp"
#include "localflow/graph.hpp"

namespace localflow {

/// mt19937_64 with hand-rolled bounded draws, so a seed produces the same
/// instance under every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

Graph path_graph(std::int64_t n);
Graph grid_graph(std::int64_t rows, std::int64_t cols);
/// Configuration model with self-loops rewired away; parallel edges may
/// remain. Requires n * d even and d < n.
Graph random_regular_graph(std::int64_t n, std::int64_t d, std::uint64_t seed);
/// m distinct vertex pairs drawn uniformly, each oriented at random.
Graph random_gnm_graph(std::int64_t n, std::int64_t m, std::uint64_t seed);

struct DemandPair {
  std::int64_t commodity;  // 1-based
  VertexId source;
  VertexId target;
  double amount;
};

/// b_j(s) += d, b_j(t) -= d for each pair; k is the largest commodity named
/// (at least min_k).
KSource pairs_demand(std::span<const DemandPair> pairs, std::size_t min_k = 1);

/// Balanced demand on l0 distinct vertices with ||b||_1 = l1 and
/// |b(v)| <= deg(v); half the vertices (rounded up) are sources.
SourceFunction random_balanced_demand(const Graph& g, std::size_t l0, double l1, Rng& rng);

/// Feasible-by-construction k-commodity demand: b_j = B f_j for a random
/// k-commodity flow f with congestion <= 1, built from `walks` random walks
/// per commodity that each push `amount` along up to max_length edges.
KSource random_routed_demand(const Graph& g, std::size_t k, std::size_t walks, double amount,
                             std::int64_t max_length, Rng& rng);

}  // namespace localflow
