#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "localflow/sparse.hpp"

namespace localflow {

enum class ResultKind { None, Flow, Certificate };

std::string to_string(ResultKind kind);

/// Counters for one solver iteration. work is cumulative over the run.
struct IterationRecord {
  std::int64_t iteration = 0;
  /// vol(A^i), or sum_j vol(A_j^i) for k commodities, for the potentials used
  /// in this iteration.
  std::int64_t active_volume = 0;
  std::int64_t touched = 0;
  std::int64_t scanned = 0;
  std::int64_t work = 0;
};

struct AuditViolation {
  std::string kind;  // "phi-helper", "r-helper" or "active-volume"
  std::int64_t iteration = 0;
  std::int64_t vertex = -1;
  std::int64_t commodity = -1;
  double measured = 0.0;
  double bound = 0.0;
};

/// Telemetry owned by one solve. A work unit is one adjacency-entry scan or
/// one weight update; each iteration is also charged one unit for its
/// termination test.
struct RunStats {
  std::vector<IterationRecord> records;
  std::int64_t planned_iterations = 0;  // T
  std::int64_t total_work = 0;
  std::size_t l0 = 0;
  double l1 = 0.0;
  double alpha = 0.0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t k = 1;
  ResultKind kind = ResultKind::None;
  std::optional<std::int64_t> certificate_volume;
  std::int64_t max_active_volume = 0;
  /// Terminations whose certificate failed verification and were skipped.
  std::int64_t resumed_terminations = 0;
  bool audited = false;
  std::vector<AuditViolation> violations;

  std::int64_t iterations_run() const { return static_cast<std::int64_t>(records.size()); }

  void record(std::int64_t active_volume, std::int64_t touched, std::int64_t scanned,
              std::int64_t work_units);
  /// Extra work outside the per-iteration loop (certificate sweeps).
  void charge(std::int64_t work_units) { total_work += work_units; }

  /// T ||b||_1 alpha / ln n; +inf when n < 2.
  double volume_bound() const;
  /// T ||b||_1 alpha / ln n evaluated for one commodity's l1.
  double volume_bound(double commodity_l1) const;
  /// T ||b||_0 + T^2 ||b||_1 alpha / ln n.
  double work_bound() const;
};

/// Active (nonzero rounded potential) entry seen by the audit.
struct ActiveAuditEntry {
  VertexId vertex = 0;
  double phi = 0.0;
  /// Cumulative residual r^{<=i} behind the potential phi.
  double cumulative_residual = 0.0;
};

struct CommodityAudit {
  std::int64_t commodity = 0;
  double l1 = 0.0;
  std::int64_t active_volume = 0;
  /// sum_v |r^{<=i}_v| deg(v)
  double residual_mass = 0.0;
  std::vector<ActiveAuditEntry> active;
};

/// State after the weight update of iteration `iteration`: the potentials are
/// the ones iteration+1 will use and the residuals are r^{<=iteration}.
struct AuditSnapshot {
  std::int64_t iteration = 0;
  std::int64_t planned_iterations = 0;
  double alpha = 0.0;
  std::int64_t n = 0;
  std::vector<CommodityAudit> commodities;
};

/// Checks the locality inequalities on a snapshot: active entries carry
/// |r^{<=i}| >= ln(n)/alpha with the sign of phi; sum_v |r^{<=i}_v| deg(v) <=
/// i ||b_j||_1; vol(A_j) <= T ||b_j||_1 alpha / ln n. All violations are
/// appended to stats; the first one is returned.
std::optional<AuditViolation> audit_iteration(const AuditSnapshot& snapshot, RunStats& stats);

/// Machine-readable totals plus the per-iteration series.
nlohmann::json report(const RunStats& stats);

}  // namespace localflow
