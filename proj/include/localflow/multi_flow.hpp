#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "localflow/flow_model.hpp"
#include "localflow/graph.hpp"
#include "localflow/instrumentation.hpp"
#include "localflow/mwu.hpp"
#include "localflow/single_flow.hpp"
#include "localflow/verify.hpp"
#include "localflow/zeroed_array.hpp"

namespace localflow {

/// Rounded potential matrix phi with <phi, (+)_j b_j> = lhs strictly above
/// rhs = sum_e max_j |phi_{u,j} - phi_{v,j}|. iteration is 0 for the
/// degree precheck.
struct PotentialCertificate {
  PotentialMatrix phi;
  double lhs = 0.0;
  double rhs = 0.0;
  std::int64_t iteration = 0;
};

struct MultiFlowOutcome {
  KFlow flow;
  std::vector<SourceFunction> residuals;
  std::vector<IntegralFlow> accumulated;
  std::int64_t iterations = 0;
};

struct MultiResult {
  std::variant<PotentialCertificate, MultiFlowOutcome> value;
  RunStats stats;

  bool is_certificate() const { return std::holds_alternative<PotentialCertificate>(value); }
  const PotentialCertificate& certificate() const { return std::get<PotentialCertificate>(value); }
  const MultiFlowOutcome& flow() const { return std::get<MultiFlowOutcome>(value); }
};

/// f^i for k commodities: each visited edge carries +-1 in at most one
/// commodity. potential_gap is sum over visited edges of max_j |Delta_j|.
struct MultiStepFlow {
  struct Entry {
    EdgeId edge;
    std::int32_t commodity;
    std::int8_t sign;
  };
  std::vector<Entry> entries;
  double potential_gap = 0.0;
  std::int64_t scanned = 0;

  KFlow to_kflow(std::size_t k) const;
};

/// For the first commodity j (then smallest v) with |b_j(v)| > deg(v),
/// the certificate phi = {(v, j): sign(b_j(v))}.
std::optional<PotentialCertificate> precheck_multi(const Graph& g, const KSource& b);

/// Local k-commodity solver over J = V x [k] x {+,-}. Each vertex keeps the
/// list of commodities with nonzero rounded potential there, so an edge costs
/// time proportional to the active commodities at its endpoints, never k.
class MultiSolver {
 public:
  MultiSolver(const Graph& g, KSource b, double eps, SolveOptions options = {});

  MultiResult solve();

  double rounded_potential(VertexId v, std::int32_t j) const;
  MultiStepFlow flow_step() const;
  bool termination_check(const MultiStepFlow& f) const;
  /// Current active potentials with the lhs/rhs of the termination test.
  PotentialCertificate current_certificate(const MultiStepFlow& f) const;
  std::int64_t update_weights(const MultiStepFlow& f);
  std::optional<AuditViolation> audit();
  AuditSnapshot audit_snapshot() const;

  std::size_t k() const { return k_; }
  double alpha() const { return engine_.params().alpha; }
  std::int64_t planned_iterations() const { return engine_.params().iterations; }
  std::int64_t iteration() const { return engine_.iteration(); }
  double weight(VertexId v, std::int32_t j, int sign) const {
    return engine_.ledger().weight(index(v, j, sign));
  }
  double cumulative_residual(VertexId v, std::int32_t j) const;
  /// Vertices of A_j.
  std::vector<VertexId> active_set(std::int32_t j) const;
  std::int64_t active_volume(std::int32_t j) const { return volumes_[static_cast<std::size_t>(j)]; }
  std::int64_t total_active_volume() const;
  std::vector<IntegralFlow> accumulated_flow() const;
  const RunStats& stats() const { return stats_; }

  void override_weight(VertexId v, std::int32_t j, int sign, double value);

  MwuIndex index(VertexId v, std::int32_t j, int sign) const {
    return 2 * (static_cast<MwuIndex>(v) * k_ + static_cast<MwuIndex>(j)) + (sign > 0 ? 0 : 1);
  }

 private:
  // State for one (vertex, commodity) pair, created on first touch.
  struct Site {
    VertexId v;
    std::int32_t j;
    std::int32_t degree;
    std::uint32_t node;
    double b;
    WeightLedger::Slot plus;
    WeightLedger::Slot minus;
    double cum_residual = 0.0;
    double phi = 0.0;
    std::int64_t net = 0;
    std::int64_t stamp = 0;
    double r = 0.0;
  };
  // Active sites at one vertex, sorted by commodity.
  struct Node {
    VertexId v;
    std::vector<std::uint32_t> active;
  };

  std::uint32_t site(VertexId v, std::int32_t j);
  const Site* find_site(VertexId v, std::int32_t j) const {
    const std::uint32_t slot = site_of_[key(v, j)];
    return slot == 0 ? nullptr : &sites_[slot - 1];
  }
  const Node* find_node(VertexId v) const {
    const std::uint32_t slot = node_of_[static_cast<std::size_t>(v)];
    return slot == 0 ? nullptr : &nodes_[slot - 1];
  }
  std::uint32_t node(VertexId v);
  void refresh(std::uint32_t id);
  std::uint64_t key(VertexId v, std::int32_t j) const {
    return static_cast<std::uint64_t>(v) * k_ + static_cast<std::uint64_t>(j);
  }

  const Graph& g_;
  KSource b_;
  std::size_t k_;
  SolveOptions options_;
  MwuEngine engine_;
  ZeroedArray<std::uint32_t> site_of_;  // key -> site id + 1, 0 if absent
  std::vector<Site> sites_;
  std::size_t b_sites_ = 0;
  ZeroedArray<std::uint32_t> node_of_;  // vertex -> node id + 1
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> active_nodes_;  // nodes with active sites, sorted by vertex
  std::vector<ZeroedArray<std::int64_t>> cum_flow_;  // by commodity, then edge
  ZeroedArray<std::uint8_t> flowed_;                 // by edge * k + commodity
  std::vector<std::pair<std::int32_t, EdgeId>> flowed_edges_;
  std::vector<std::int64_t> volumes_;
  std::vector<double> commodity_l1_;
  std::vector<std::uint32_t> touched_;
  std::vector<MwuEngine::SlotGain> gains_;
  RunStats stats_;
};

MultiResult solve_multi(const Graph& g, const KSource& b, double eps, SolveOptions options = {});

}  // namespace localflow
