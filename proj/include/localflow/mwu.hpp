#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"

namespace localflow {

using MwuIndex = std::uint64_t;

/// Smallest T >= 1 with alpha^2 T >= ln(index_count * (1 + 1.5 T max(approx_bound, 1))).
/// At that T the closing inequality of the approximate-weights MWU analysis
/// holds, so every index's average gain is at most 5 alpha.
/// Throws std::invalid_argument unless 0 < alpha <= 1/4, index_count >= 1 and
/// approx_bound >= 0.
std::int64_t compute_iterations(double alpha, std::uint64_t index_count, double approx_bound);

struct MwuParams {
  double alpha = 0.25;
  std::uint64_t index_count = 1;
  /// Weights strictly below this round to 0.
  double round_threshold = 0.0;
  /// Upper bound on ||w - w~||_inf; enters the iteration count.
  double approx_bound = 0.0;
  std::int64_t iterations = 1;

  /// Fills in iterations via compute_iterations.
  static MwuParams with_iterations(double alpha, std::uint64_t index_count,
                                   double round_threshold, double approx_bound);
};

/// Sparse MWU weights; an index that has never been updated has weight 1.
/// Materialized indices live in a dense slot array, so callers that hold a
/// slot handle skip the hash lookup.
class WeightLedger {
 public:
  using Slot = std::uint32_t;

  double weight(MwuIndex j) const {
    auto it = slots_.find(j);
    return it == slots_.end() ? 1.0 : w_[it->second];
  }
  bool materialized(MwuIndex j) const { return slots_.contains(j); }
  std::size_t materialized_count() const { return w_.size(); }
  /// Slot for j, materializing it at weight 1 if needed.
  Slot slot(MwuIndex j);
  double weight_at(Slot s) const { return w_[s]; }
  MwuIndex index_at(Slot s) const { return index_[s]; }
  /// Sum of all |J| weights, counting absent indices as 1.
  double total_weight(std::uint64_t index_count) const;
  double min_weight() const;
  void scale(MwuIndex j, double factor) { w_[slot(j)] *= factor; }
  void scale_at(Slot s, double factor) { w_[s] *= factor; }
  /// Overwrites a weight. Only test fixtures should need this.
  void set(MwuIndex j, double value) { w_[slot(j)] = value; }

 private:
  absl::flat_hash_map<MwuIndex, Slot> slots_;
  std::vector<double> w_;
  std::vector<MwuIndex> index_;
};

inline double round_weight(double w, double threshold) { return w >= threshold ? w : 0.0; }

/// The approximate weight vector w~: w where w >= threshold, else 0.
class RoundedWeights {
 public:
  RoundedWeights(const WeightLedger& ledger, double threshold)
      : ledger_(&ledger), threshold_(threshold) {}
  double operator()(MwuIndex j) const { return round_weight(ledger_->weight(j), threshold_); }
  double threshold() const { return threshold_; }

 private:
  const WeightLedger* ledger_;
  double threshold_;
};

inline RoundedWeights round_weights(const WeightLedger& w, double threshold) {
  return RoundedWeights(w, threshold);
}

using Gain = std::pair<MwuIndex, double>;
using GainVector = std::vector<Gain>;

/// A gain vector broke ||g||_inf <= 2 or <g, w~> <= 0.
class MwuContractViolation : public std::runtime_error {
 public:
  MwuContractViolation(const std::string& what, std::int64_t iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

/// Step-at-a-time MWU with rounded weights. Each step() validates the gain
/// vector against the current rounded weights and then applies
/// w_j <- w_j (1 + alpha g_j). Only indices that ever receive a nonzero gain
/// are materialized.
class MwuEngine {
 public:
  explicit MwuEngine(const MwuParams& params, bool track_gain_sums = true);

  const MwuParams& params() const { return params_; }
  const WeightLedger& ledger() const { return ledger_; }
  RoundedWeights rounded() const { return RoundedWeights(ledger_, params_.round_threshold); }
  double rounded_weight(MwuIndex j) const { return round_weight(ledger_.weight(j), params_.round_threshold); }
  /// ||w~||_1 over all |J| indices, maintained incrementally.
  double rounded_l1() const { return rounded_l1_; }
  /// Number of completed steps.
  std::int64_t iteration() const { return iteration_; }

  /// Gains must name distinct indices below index_count. Throws
  /// MwuContractViolation (weights untouched) if the gain vector violates the
  /// step preconditions.
  void step(std::span<const Gain> gains);
  /// Same as step() with gains addressed by ledger slot.
  using SlotGain = std::pair<WeightLedger::Slot, double>;
  void step_slots(std::span<const SlotGain> gains);
  /// Slot for index j; throws std::out_of_range if j is outside J.
  WeightLedger::Slot slot(MwuIndex j);
  double rounded_weight_at(WeightLedger::Slot s) const {
    return round_weight(ledger_.weight_at(s), params_.round_threshold);
  }

  /// (1/iteration) sum_i g_j^i for every index that ever received a gain.
  std::map<MwuIndex, double> average_gains() const;

  /// Test hook: overwrite a weight and keep rounded_l1 consistent.
  void override_weight(MwuIndex j, double value);

 private:
  void check_dot(double dot, std::int64_t iteration) const;
  void apply(std::span<const SlotGain> gains);

  MwuParams params_;
  bool track_gain_sums_;
  WeightLedger ledger_;
  double rounded_l1_;
  std::int64_t iteration_ = 0;
  std::vector<double> gain_sums_;  // by slot
  std::vector<SlotGain> scratch_;
};

struct MwuReport {
  std::int64_t iterations = 0;
  std::map<MwuIndex, double> average_gain;
  double max_average_gain = 0.0;
  double final_total_weight = 0.0;
};

/// Called once per iteration i = 1..T with the current weights and their
/// rounded view; returns the sparse gain vector g^i.
using GainProvider =
    std::function<GainVector(std::int64_t iteration, const WeightLedger&, const RoundedWeights&)>;

MwuReport run_mwu(const MwuParams& params, const GainProvider& provider);

}  // namespace localflow
