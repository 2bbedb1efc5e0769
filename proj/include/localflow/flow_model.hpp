#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "localflow/graph.hpp"

namespace localflow {

/// k-commodity source function; commodity j (0-based here) is commodities[j].
struct KSource {
  std::vector<SourceFunction> commodities;

  KSource() = default;
  explicit KSource(std::size_t k) : commodities(k) {}
  explicit KSource(std::vector<SourceFunction> c) : commodities(std::move(c)) {}

  std::size_t k() const { return commodities.size(); }
  SourceFunction& operator[](std::size_t j) { return commodities[j]; }
  const SourceFunction& operator[](std::size_t j) const { return commodities[j]; }
};

/// k-commodity flow; commodity j is commodities[j].
struct KFlow {
  std::vector<Flow> commodities;

  KFlow() = default;
  explicit KFlow(std::size_t k) : commodities(k) {}
  explicit KFlow(std::vector<Flow> c) : commodities(std::move(c)) {}

  std::size_t k() const { return commodities.size(); }
  Flow& operator[](std::size_t j) { return commodities[j]; }
  const Flow& operator[](std::size_t j) const { return commodities[j]; }
};

struct Norms {
  std::size_t l0 = 0;
  double l1 = 0.0;
};

Norms norms(const SourceFunction& b);
Norms norms(const KSource& b);

/// Unnormalized residual b - Bf.
SourceFunction residual(const Graph& g, const SourceFunction& b, const Flow& f);

/// max_e |f(e)|.
double congestion(const Flow& f);
/// max_e sum_j |f_j(e)|.
double congestion(const KFlow& f);

/// |sum_v b(v)| <= 1e-9 * max(1, ||b||_1).
bool is_balanced(const SourceFunction& b);

struct WeightedPair {
  VertexId source;
  VertexId target;
  double amount;

  friend bool operator==(const WeightedPair&, const WeightedPair&) = default;
};

class UnbalancedDemand : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Splits a balanced demand r into pairs (s, t, d) with
/// sum_i d_i (1_s - 1_t) = r, using at most ||r||_0 pairs. Surpluses and
/// deficits are matched greedily in ascending vertex order; each emitted pair
/// retires at least one of the two heads.
std::vector<WeightedPair> decompose_to_pairs(const SourceFunction& r);

/// Inverse of decompose_to_pairs.
SourceFunction compose_pairs(std::span<const WeightedPair> pairs);

}  // namespace localflow
