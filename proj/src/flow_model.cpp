#include "localflow/flow_model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace localflow {

Norms norms(const SourceFunction& b) { return {b.size(), b.l1()}; }

Norms norms(const KSource& b) {
  Norms total;
  for (const auto& bj : b.commodities) {
    total.l0 += bj.size();
    total.l1 += bj.l1();
  }
  return total;
}

SourceFunction residual(const Graph& g, const SourceFunction& b, const Flow& f) {
  return b - apply_incidence(g, f);
}

double congestion(const Flow& f) { return f.linf(); }

double congestion(const KFlow& f) {
  std::unordered_map<EdgeId, double> load;
  for (const auto& fj : f.commodities) {
    for (const auto& [e, value] : fj) load[e] += std::abs(value);
  }
  double worst = 0.0;
  for (const auto& [e, l] : load) worst = std::max(worst, l);
  return worst;
}

bool is_balanced(const SourceFunction& b) {
  return std::abs(b.sum()) <= 1e-9 * std::max(1.0, b.l1());
}

std::vector<WeightedPair> decompose_to_pairs(const SourceFunction& r) {
  if (!is_balanced(r)) {
    throw UnbalancedDemand("demand does not sum to zero (sum = " + std::to_string(r.sum()) + ")");
  }
  struct Entry {
    VertexId v;
    double remaining;
  };
  std::vector<Entry> surplus;
  std::vector<Entry> deficit;
  for (const auto& [v, value] : r) {
    if (value > 0) {
      surplus.push_back({v, value});
    } else {
      deficit.push_back({v, -value});
    }
  }
  // Remainders this small are float noise from earlier subtractions.
  const double retire = kPurgeThreshold * std::max(1.0, r.l1());

  std::vector<WeightedPair> pairs;
  std::size_t s = 0;
  std::size_t t = 0;
  while (s < surplus.size() && t < deficit.size()) {
    const double amount = std::min(surplus[s].remaining, deficit[t].remaining);
    pairs.push_back({surplus[s].v, deficit[t].v, amount});
    surplus[s].remaining -= amount;
    deficit[t].remaining -= amount;
    if (surplus[s].remaining <= retire) ++s;
    if (deficit[t].remaining <= retire) ++t;
  }
  return pairs;
}

SourceFunction compose_pairs(std::span<const WeightedPair> pairs) {
  SourceFunction out;
  for (const auto& p : pairs) {
    out.add(p.source, p.amount);
    out.add(p.target, -p.amount);
  }
  return out;
}

}  // namespace localflow
