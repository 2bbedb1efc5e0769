#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "localflow/flow_model.hpp"
#include "localflow/graph.hpp"

namespace localflow {

/// Sparse potential matrix keyed by (vertex, commodity), commodity 0-based.
using PotentialMatrix = std::map<std::pair<VertexId, std::int32_t>, double>;

struct Violation {
  std::string kind;
  std::string location;
  double measured = 0.0;
  double bound = 0.0;
};

struct VerifyReport {
  bool ok = true;
  std::vector<Violation> violations;

  void fail(Violation v) {
    ok = false;
    violations.push_back(std::move(v));
  }
};

/// ok iff |b(S)| > delta(S), both recomputed from scratch.
VerifyReport verify_cut_certificate(const Graph& g, const SourceFunction& b,
                                    std::span<const VertexId> s);

/// ok iff sum_{v,j} phi_{v,j} b_j(v) > sum_{(u,v) in E} max_j |phi_{u,j} - phi_{v,j}|.
/// The right side is the largest value <phi, (+)_j B f_j> takes over feasible
/// k-commodity flows, so a positive gap proves the demand infeasible. Scans
/// every edge.
VerifyReport verify_potential_certificate(const Graph& g, const KSource& b, const PotentialMatrix& phi);

/// Checks sum_j |f_j(e)| <= 1 + 1e-9 on every edge and
/// |b_j(v) - (B f_j)_v| <= eps deg(v) + 1e-9 on every vertex and commodity.
VerifyReport verify_flow_output(const Graph& g, const KSource& b, const KFlow& f, double eps);

/// Exact single-commodity feasibility by max-flow on the standard
/// super-source/super-sink reduction with every capacity multiplied by
/// scale. Requires scale * b(v) integral and b balanced; throws
/// std::invalid_argument otherwise.
bool oracle_feasible_single(const Graph& g, const SourceFunction& b, std::int64_t scale);

}  // namespace localflow
