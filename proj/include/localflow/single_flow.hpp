#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "localflow/flow_model.hpp"
#include "localflow/graph.hpp"
#include "localflow/instrumentation.hpp"
#include "localflow/mwu.hpp"
#include "localflow/zeroed_array.hpp"

namespace localflow {

struct SolveOptions {
  /// Check the locality inequalities after every iteration and record any
  /// violation in RunStats.
  bool audit = false;
};

/// A set S with |b(S)| > delta(S). iteration is 0 for the degree precheck.
struct CutCertificate {
  std::vector<VertexId> set;
  double b_of_s = 0.0;
  std::int64_t boundary = 0;
  std::int64_t volume = 0;
  std::int64_t iteration = 0;
};

using IntegralFlow = std::map<EdgeId, std::int64_t>;

/// Averaged flow f = (sum_i f^i) / T with its residual b - Bf.
struct SingleFlowOutcome {
  Flow flow;
  SourceFunction residual;
  IntegralFlow accumulated;
  std::int64_t iterations = 0;
};

struct SingleResult {
  std::variant<CutCertificate, SingleFlowOutcome> value;
  RunStats stats;

  bool is_certificate() const { return std::holds_alternative<CutCertificate>(value); }
  const CutCertificate& certificate() const { return std::get<CutCertificate>(value); }
  const SingleFlowOutcome& flow() const { return std::get<SingleFlowOutcome>(value); }
};

/// The per-iteration flow f^i in {-1, 0, +1}^E, listed in visit order, plus
/// sum over visited edges of |phi_u - phi_v| (which equals <phi, B f^i>).
struct StepFlow {
  std::vector<std::pair<EdgeId, std::int8_t>> entries;
  double potential_gap = 0.0;
  std::int64_t scanned = 0;

  Flow to_flow() const;
};

/// Sweep found no prefix with |b(S)| > delta(S).
class CertificateExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns {v} for the smallest v with |b(v)| > deg(v).
std::optional<CutCertificate> precheck(const Graph& g, const SourceFunction& b);

/// Stateful local single-commodity solver. MWU runs over J = V x {+,-}, with
/// weights rounded to 0 below n; only vertices with nonzero rounded potential
/// (the active set) or nonzero b are ever examined.
///
/// solve() drives the whole run; the step methods are public so the
/// individual stages can be exercised directly.
class SingleSolver {
 public:
  SingleSolver(const Graph& g, SourceFunction b, double eps, SolveOptions options = {});

  SingleResult solve();

  double rounded_potential(VertexId v) const;
  StepFlow flow_step() const;
  bool termination_check(const StepFlow& f) const;
  /// Sweep cut over the current potentials. Throws CertificateExtractionError
  /// if neither sweep yields |b(S)| > delta(S).
  CutCertificate extract_certificate() const;
  /// Steps 5-6: residual gains for every vertex with b(v) != 0 or incident
  /// flow, MWU update, active-set refresh. Returns the number of touched
  /// vertices.
  std::int64_t update_weights(const StepFlow& f);
  std::optional<AuditViolation> audit();
  AuditSnapshot audit_snapshot() const;

  double alpha() const { return engine_.params().alpha; }
  std::int64_t planned_iterations() const { return engine_.params().iterations; }
  std::int64_t iteration() const { return engine_.iteration(); }
  const WeightLedger& weights() const { return engine_.ledger(); }
  double weight(VertexId v, int sign) const { return engine_.ledger().weight(index(v, sign)); }
  double cumulative_residual(VertexId v) const;
  /// Active vertices with their rounded potentials, ascending by vertex.
  std::vector<std::pair<VertexId, double>> active() const;
  std::int64_t active_volume() const { return active_volume_; }
  IntegralFlow accumulated_flow() const;
  const RunStats& stats() const { return stats_; }

  /// Test hook: overwrite w_{v,sign} and refresh v's potential.
  void override_weight(VertexId v, int sign, double value);

  static MwuIndex index(VertexId v, int sign) {
    return 2 * static_cast<MwuIndex>(v) + (sign > 0 ? 0 : 1);
  }

 private:
  // Per-vertex state, created the first time a vertex is touched.
  struct Site {
    VertexId v;
    std::int32_t degree;
    double b;
    WeightLedger::Slot plus;
    WeightLedger::Slot minus;
    double cum_residual = 0.0;
    double phi = 0.0;
    std::int64_t net = 0;  // (B f^i)_v for the step being applied
    std::int64_t stamp = 0;
    double r = 0.0;
  };

  std::uint32_t site(VertexId v);
  const Site* find_site(VertexId v) const {
    const std::uint32_t slot = site_of_[static_cast<std::size_t>(v)];
    return slot == 0 ? nullptr : &sites_[slot - 1];
  }
  void refresh(std::uint32_t id);

  const Graph& g_;
  SourceFunction b_;
  double eps_;
  SolveOptions options_;
  MwuEngine engine_;
  ZeroedArray<std::uint32_t> site_of_;  // vertex -> site id + 1, 0 if absent
  std::vector<Site> sites_;
  std::size_t b_sites_ = 0;        // sites [0, b_sites_) hold the support of b
  std::vector<std::uint32_t> active_;  // sorted by vertex
  std::int64_t active_volume_ = 0;
  ZeroedArray<std::int64_t> cum_flow_;  // by edge
  ZeroedArray<std::uint8_t> flowed_;
  std::vector<EdgeId> flowed_edges_;
  std::vector<std::uint32_t> touched_;
  std::vector<MwuEngine::SlotGain> gains_;
  RunStats stats_;
};

SingleResult solve_single(const Graph& g, const SourceFunction& b, double eps, SolveOptions options = {});

/// Shared parameter choice: alpha = eps / 5, rounding threshold and
/// approximation bound n, T from compute_iterations with |J| indices.
MwuParams flow_mwu_params(const Graph& g, double eps, std::uint64_t index_count);

/// lhs > rhs beyond 1e-9 (1 + |lhs| + |rhs|).
bool exceeds_with_tolerance(double lhs, double rhs);

}  // namespace localflow
