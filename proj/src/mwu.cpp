#include "localflow/mwu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace localflow {
namespace {

bool satisfies_bound(std::int64_t t, double alpha, double log_index_count, double slack) {
  const double td = static_cast<double>(t);
  return alpha * alpha * td >= log_index_count + std::log1p(1.5 * td * slack);
}

}  // namespace

std::int64_t compute_iterations(double alpha, std::uint64_t index_count, double approx_bound) {
  if (!(alpha > 0.0 && alpha <= 0.25)) {
    throw std::invalid_argument("alpha must lie in (0, 1/4], got " + std::to_string(alpha));
  }
  if (index_count < 1) throw std::invalid_argument("index_count must be >= 1");
  if (!(approx_bound >= 0.0) || !std::isfinite(approx_bound)) {
    throw std::invalid_argument("approx_bound must be finite and >= 0");
  }
  const double log_j = std::log(static_cast<double>(index_count));
  const double slack = std::max(approx_bound, 1.0);

  std::int64_t hi = 1;
  while (!satisfies_bound(hi, alpha, log_j, slack)) {
    if (hi > std::numeric_limits<std::int64_t>::max() / 4) {
      throw std::invalid_argument("iteration count overflows");
    }
    hi *= 2;
  }
  std::int64_t lo = hi / 2;  // fails, or is 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (satisfies_bound(mid, alpha, log_j, slack)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

MwuParams MwuParams::with_iterations(double alpha, std::uint64_t index_count,
                                     double round_threshold, double approx_bound) {
  MwuParams p;
  p.alpha = alpha;
  p.index_count = index_count;
  p.round_threshold = round_threshold;
  p.approx_bound = approx_bound;
  p.iterations = compute_iterations(alpha, index_count, approx_bound);
  return p;
}

WeightLedger::Slot WeightLedger::slot(MwuIndex j) {
  auto [it, inserted] = slots_.try_emplace(j, static_cast<Slot>(w_.size()));
  if (inserted) {
    w_.push_back(1.0);
    index_.push_back(j);
  }
  return it->second;
}

double WeightLedger::total_weight(std::uint64_t index_count) const {
  double total = static_cast<double>(index_count - w_.size());
  for (double w : w_) total += w;
  return total;
}

double WeightLedger::min_weight() const {
  double lo = 1.0;
  for (double w : w_) lo = std::min(lo, w);
  return lo;
}

MwuEngine::MwuEngine(const MwuParams& params, bool track_gain_sums)
    : params_(params), track_gain_sums_(track_gain_sums) {
  if (!(params.alpha > 0.0 && params.alpha <= 0.25)) {
    throw std::invalid_argument("alpha must lie in (0, 1/4], got " + std::to_string(params.alpha));
  }
  if (params.index_count < 1) throw std::invalid_argument("index_count must be >= 1");
  if (!(params.round_threshold >= 0.0)) throw std::invalid_argument("round_threshold must be >= 0");
  rounded_l1_ = static_cast<double>(params.index_count) * round_weight(1.0, params.round_threshold);
}

WeightLedger::Slot MwuEngine::slot(MwuIndex j) {
  if (j >= params_.index_count) {
    throw std::out_of_range("MWU index " + std::to_string(j) + " outside J");
  }
  const WeightLedger::Slot s = ledger_.slot(j);
  if (track_gain_sums_ && gain_sums_.size() <= s) gain_sums_.resize(s + 1, 0.0);
  return s;
}

void MwuEngine::step(std::span<const Gain> gains) {
  const std::int64_t i = iteration_ + 1;
  for (const auto& [j, g] : gains) {
    if (j >= params_.index_count) {
      throw MwuContractViolation("iteration " + std::to_string(i) + ": gain index " +
                                     std::to_string(j) + " outside J",
                                 i);
    }
  }
  // Validate before materializing anything so a rejected step leaves no trace.
  double dot = 0.0;
  for (const auto& [j, g] : gains) {
    if (!(std::abs(g) <= 2.0)) {
      throw MwuContractViolation("iteration " + std::to_string(i) + ": |g_" + std::to_string(j) +
                                     "| = " + std::to_string(std::abs(g)) + " exceeds 2",
                                 i);
    }
    dot += g * rounded_weight(j);
  }
  check_dot(dot, i);
  scratch_.clear();
  for (const auto& [j, g] : gains) scratch_.emplace_back(slot(j), g);
  apply(scratch_);
}

void MwuEngine::step_slots(std::span<const SlotGain> gains) {
  const std::int64_t i = iteration_ + 1;
  double dot = 0.0;
  for (const auto& [s, g] : gains) {
    if (!(std::abs(g) <= 2.0)) {
      throw MwuContractViolation("iteration " + std::to_string(i) + ": |g_" +
                                     std::to_string(ledger_.index_at(s)) + "| = " +
                                     std::to_string(std::abs(g)) + " exceeds 2",
                                 i);
    }
    dot += g * rounded_weight_at(s);
  }
  check_dot(dot, i);
  apply(gains);
}

void MwuEngine::check_dot(double dot, std::int64_t i) const {
  const double tolerance = 1e-9 * (1.0 + rounded_l1_);
  if (dot > tolerance) {
    throw MwuContractViolation("iteration " + std::to_string(i) + ": <g, w~> = " +
                                   std::to_string(dot) + " is positive",
                               i);
  }
}

void MwuEngine::apply(std::span<const SlotGain> gains) {
  const double threshold = params_.round_threshold;
  for (const auto& [s, g] : gains) {
    if (g == 0.0) continue;
    const double before = ledger_.weight_at(s);
    ledger_.scale_at(s, 1.0 + params_.alpha * g);
    rounded_l1_ += round_weight(ledger_.weight_at(s), threshold) - round_weight(before, threshold);
    if (track_gain_sums_) gain_sums_[s] += g;
  }
  ++iteration_;
}

std::map<MwuIndex, double> MwuEngine::average_gains() const {
  std::map<MwuIndex, double> out;
  if (iteration_ == 0) return out;
  for (std::size_t s = 0; s < gain_sums_.size(); ++s) {
    out[ledger_.index_at(static_cast<WeightLedger::Slot>(s))] = gain_sums_[s] / static_cast<double>(iteration_);
  }
  return out;
}

void MwuEngine::override_weight(MwuIndex j, double value) {
  const double before = ledger_.weight(j);
  slot(j);
  ledger_.set(j, value);
  rounded_l1_ += round_weight(value, params_.round_threshold) -
                 round_weight(before, params_.round_threshold);
}

MwuReport run_mwu(const MwuParams& params, const GainProvider& provider) {
  MwuEngine engine(params);
  for (std::int64_t i = 1; i <= params.iterations; ++i) {
    const GainVector g = provider(i, engine.ledger(), engine.rounded());
    engine.step(g);
  }
  MwuReport report;
  report.iterations = engine.iteration();
  report.average_gain = engine.average_gains();
  report.max_average_gain = report.average_gain.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (const auto& [j, avg] : report.average_gain) {
    report.max_average_gain = std::max(report.max_average_gain, avg);
  }
  if (report.average_gain.size() < params.index_count) {
    report.max_average_gain = std::max(report.max_average_gain, 0.0);
  }
  report.final_total_weight = engine.ledger().total_weight(params.index_count);
  return report;
}

}  // namespace localflow
