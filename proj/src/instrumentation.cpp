#include "localflow/instrumentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace localflow {
namespace {

// Relative slack for float products and sums behind the audited inequalities.
constexpr double kAuditSlack = 1e-9;

double log_n(std::int64_t n) { return std::log(static_cast<double>(n)); }

}  // namespace

std::string to_string(ResultKind kind) {
  switch (kind) {
    case ResultKind::Flow:
      return "flow";
    case ResultKind::Certificate:
      return "certificate";
    case ResultKind::None:
      break;
  }
  return "none";
}

void RunStats::record(std::int64_t active_volume, std::int64_t touched, std::int64_t scanned,
                      std::int64_t work_units) {
  total_work += work_units;
  max_active_volume = std::max(max_active_volume, active_volume);
  records.push_back({iterations_run() + 1, active_volume, touched, scanned, total_work});
}

double RunStats::volume_bound(double commodity_l1) const {
  if (n < 2) return std::numeric_limits<double>::infinity();
  return static_cast<double>(planned_iterations) * commodity_l1 * alpha / log_n(n);
}

double RunStats::volume_bound() const { return volume_bound(l1); }

double RunStats::work_bound() const {
  const double t = static_cast<double>(planned_iterations);
  double bound = t * static_cast<double>(l0);
  if (n >= 2) bound += t * t * l1 * alpha / log_n(n);
  return bound;
}

std::optional<AuditViolation> audit_iteration(const AuditSnapshot& snapshot, RunStats& stats) {
  stats.audited = true;
  std::optional<AuditViolation> first;
  auto flag = [&](AuditViolation v) {
    if (!first) first = v;
    stats.violations.push_back(std::move(v));
  };
  if (snapshot.n < 2) return first;

  const double phi_floor = log_n(snapshot.n) / snapshot.alpha;
  const double i = static_cast<double>(snapshot.iteration);
  const double t = static_cast<double>(snapshot.planned_iterations);
  for (const CommodityAudit& c : snapshot.commodities) {
    for (const ActiveAuditEntry& a : c.active) {
      const double signed_residual = a.phi > 0 ? a.cumulative_residual : -a.cumulative_residual;
      if (signed_residual < phi_floor * (1.0 - kAuditSlack)) {
        flag({"phi-helper", snapshot.iteration, a.vertex, c.commodity, signed_residual, phi_floor});
      }
    }
    const double mass_bound = i * c.l1;
    if (c.residual_mass > mass_bound + kAuditSlack * (1.0 + mass_bound)) {
      flag({"r-helper", snapshot.iteration, -1, c.commodity, c.residual_mass, mass_bound});
    }
    const double vol_bound = t * c.l1 * snapshot.alpha / log_n(snapshot.n);
    if (static_cast<double>(c.active_volume) > vol_bound * (1.0 + kAuditSlack)) {
      flag({"active-volume", snapshot.iteration, -1, c.commodity,
            static_cast<double>(c.active_volume), vol_bound});
    }
  }
  return first;
}

nlohmann::json report(const RunStats& stats) {
  using nlohmann::json;
  json series = {{"active_volume", json::array()},
                 {"touched", json::array()},
                 {"scanned", json::array()},
                 {"work", json::array()}};
  for (const IterationRecord& r : stats.records) {
    series["active_volume"].push_back(r.active_volume);
    series["touched"].push_back(r.touched);
    series["scanned"].push_back(r.scanned);
    series["work"].push_back(r.work);
  }
  const double work_bound = stats.work_bound();
  json totals = {
      {"result", to_string(stats.kind)},
      {"planned_iterations", stats.planned_iterations},
      {"iterations", stats.iterations_run()},
      {"total_work", stats.total_work},
      {"l0", stats.l0},
      {"l1", stats.l1},
      {"alpha", stats.alpha},
      {"n", stats.n},
      {"m", stats.m},
      {"k", stats.k},
      {"max_active_volume", stats.max_active_volume},
      {"volume_bound", stats.n >= 2 ? json(stats.volume_bound()) : json(nullptr)},
      {"work_bound", work_bound},
      {"work_constant", work_bound > 0 ? json(stats.total_work / work_bound) : json(nullptr)},
      {"resumed_terminations", stats.resumed_terminations},
  };
  if (stats.certificate_volume) totals["certificate_volume"] = *stats.certificate_volume;

  json violations = json::array();
  for (const AuditViolation& v : stats.violations) {
    violations.push_back({{"kind", v.kind},
                          {"iteration", v.iteration},
                          {"vertex", v.vertex},
                          {"commodity", v.commodity},
                          {"measured", v.measured},
                          {"bound", v.bound}});
  }
  return {{"totals", totals},
          {"audited", stats.audited},
          {"violations", violations},
          {"series", series}};
}

}  // namespace localflow
