#pragma once

#include <algorithm>
#include <cmath>

#include "localflow/generators.hpp"
#include "localflow/mwu.hpp"

namespace localflow::test {

/// Random gain source that stays inside the MWU step contract: a random
/// vector in [-2, 2]^J projected onto <g, w~> <= 0 and clipped back to the
/// box. A greedy adversary also puts +2 on every index whose weight rounds
/// to zero, since those are free to exploit.
class Adversary {
 public:
  Adversary(std::uint64_t index_count, std::uint64_t seed, bool greedy)
      : j_(index_count), rng_(seed), greedy_(greedy) {}

  GainVector next(const WeightLedger&, const RoundedWeights& wt) {
    std::vector<double> g(j_);
    std::vector<double> w(j_);
    double ww = 0.0;
    for (std::uint64_t i = 0; i < j_; ++i) {
      w[i] = wt(i);
      ww += w[i] * w[i];
      g[i] = (greedy_ && w[i] == 0.0) ? 2.0 : rng_.uniform(-2.0, 2.0);
    }
    for (int round = 0; round < 50; ++round) {
      double dot = 0.0;
      for (std::uint64_t i = 0; i < j_; ++i) dot += g[i] * w[i];
      if (dot <= 0.0) break;
      for (std::uint64_t i = 0; i < j_; ++i) g[i] = std::clamp(g[i] - dot / ww * w[i], -2.0, 2.0);
    }
    double dot = 0.0;
    for (std::uint64_t i = 0; i < j_; ++i) dot += g[i] * w[i];
    if (dot > 0.0) {
      // Fallback that is exactly compliant.
      for (std::uint64_t i = 0; i < j_; ++i) {
        if (w[i] > 0.0 && g[i] > 0.0) g[i] = 0.0;
      }
    }
    GainVector out;
    for (std::uint64_t i = 0; i < j_; ++i) {
      if (g[i] != 0.0) out.emplace_back(i, g[i]);
    }
    return out;
  }

 private:
  std::uint64_t j_;
  Rng rng_;
  bool greedy_;
};

}  // namespace localflow::test
