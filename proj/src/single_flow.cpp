#include "localflow/single_flow.hpp"

#include <algorithm>
#include <cmath>

#include "absl/container/flat_hash_set.h"

#include "localflow/verify.hpp"

namespace localflow {

Flow StepFlow::to_flow() const {
  Flow f;
  for (const auto& [e, s] : entries) f.set(e, s);
  return f;
}

bool exceeds_with_tolerance(double lhs, double rhs) {
  return lhs > rhs + 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs));
}

MwuParams flow_mwu_params(const Graph& g, double eps, std::uint64_t index_count) {
  if (!std::isfinite(eps) || !(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("eps must lie in (0, 1), got " + std::to_string(eps));
  }
  const double n = static_cast<double>(g.vertex_count());
  return MwuParams::with_iterations(eps / 5.0, index_count, n, n);
}

std::optional<CutCertificate> precheck(const Graph& g, const SourceFunction& b) {
  for (const auto& [v, value] : b) {
    if (std::abs(value) > g.degree(v)) {
      return CutCertificate{{v}, value, g.degree(v), g.degree(v), 0};
    }
  }
  return std::nullopt;
}

namespace {

void check_source(const Graph& g, const SourceFunction& b) {
  for (const auto& [v, value] : b) {
    if (!g.contains_vertex(v)) throw std::invalid_argument("source vertex " + std::to_string(v) + " out of range");
    if (!std::isfinite(value)) throw std::invalid_argument("source value at " + std::to_string(v) + " is not finite");
  }
}

}  // namespace

SingleSolver::SingleSolver(const Graph& g, SourceFunction b, double eps, SolveOptions options)
    : g_(g),
      b_(std::move(b)),
      eps_(eps),
      options_(options),
      engine_(flow_mwu_params(g, eps, 2 * static_cast<std::uint64_t>(g.vertex_count())),
              /*track_gain_sums=*/false),
      site_of_(static_cast<std::size_t>(g.vertex_count())),
      cum_flow_(static_cast<std::size_t>(g.edge_count())),
      flowed_(static_cast<std::size_t>(g.edge_count())) {
  check_source(g_, b_);
  for (const auto& [v, value] : b_) sites_[site(v)].b = value;
  b_sites_ = sites_.size();
  const Norms nb = norms(b_);
  stats_.planned_iterations = engine_.params().iterations;
  stats_.l0 = nb.l0;
  stats_.l1 = nb.l1;
  stats_.alpha = engine_.params().alpha;
  stats_.n = g_.vertex_count();
  stats_.m = g_.edge_count();
  stats_.k = 1;
}

std::uint32_t SingleSolver::site(VertexId v) {
  std::uint32_t& slot = site_of_[static_cast<std::size_t>(v)];
  if (slot == 0) {
    const WeightLedger::Slot plus = engine_.slot(index(v, +1));
    const WeightLedger::Slot minus = engine_.slot(index(v, -1));
    sites_.push_back(Site{v, static_cast<std::int32_t>(g_.degree(v)), 0.0, plus, minus});
    slot = static_cast<std::uint32_t>(sites_.size());
  }
  return slot - 1;
}

double SingleSolver::rounded_potential(VertexId v) const {
  if (g_.degree(v) == 0) return 0.0;
  const double plus = engine_.rounded_weight(index(v, +1));
  const double minus = engine_.rounded_weight(index(v, -1));
  return (plus - minus) / g_.degree(v);
}

double SingleSolver::cumulative_residual(VertexId v) const {
  const Site* s = find_site(v);
  return s ? s->cum_residual : 0.0;
}

std::vector<std::pair<VertexId, double>> SingleSolver::active() const {
  std::vector<std::pair<VertexId, double>> out;
  out.reserve(active_.size());
  for (std::uint32_t id : active_) out.emplace_back(sites_[id].v, sites_[id].phi);
  return out;
}

StepFlow SingleSolver::flow_step() const {
  StepFlow f;
  for (std::uint32_t id : active_) {
    const VertexId v = sites_[id].v;
    const double phi_v = sites_[id].phi;
    for (const Incidence& inc : g_.incidences(v)) {
      ++f.scanned;
      const VertexId w = g_.other(inc.edge, v);
      const Site* other = find_site(w);
      const double phi_w = other ? other->phi : 0.0;
      // Both endpoints active: the edge was handled from the smaller one.
      if (phi_w != 0.0 && w < v) continue;
      const double diff = inc.sign > 0 ? phi_v - phi_w : phi_w - phi_v;
      f.potential_gap += std::abs(diff);
      if (diff > 0) {
        f.entries.emplace_back(inc.edge, std::int8_t{1});
      } else if (diff < 0) {
        f.entries.emplace_back(inc.edge, std::int8_t{-1});
      }
    }
  }
  return f;
}

bool SingleSolver::termination_check(const StepFlow& f) const {
  double lhs = 0.0;
  for (std::uint32_t id : active_) lhs += sites_[id].phi * sites_[id].b;
  return exceeds_with_tolerance(lhs, f.potential_gap);
}

CutCertificate SingleSolver::extract_certificate() const {
  std::vector<const Site*> positive;
  std::vector<const Site*> negative;
  for (std::uint32_t id : active_) (sites_[id].phi > 0 ? positive : negative).push_back(&sites_[id]);
  std::stable_sort(positive.begin(), positive.end(), [](const Site* a, const Site* b) { return a->phi > b->phi; });
  std::stable_sort(negative.begin(), negative.end(), [](const Site* a, const Site* b) { return a->phi < b->phi; });

  auto sweep = [&](const std::vector<const Site*>& order, double orientation) -> std::optional<CutCertificate> {
    absl::flat_hash_set<VertexId> members;
    CutCertificate cert;
    for (const Site* s : order) {
      std::int64_t inside = 0;
      for (const Incidence& inc : g_.incidences(s->v)) {
        if (members.contains(g_.other(inc.edge, s->v))) ++inside;
      }
      members.insert(s->v);
      cert.set.push_back(s->v);
      cert.boundary += s->degree - 2 * inside;
      cert.volume += s->degree;
      cert.b_of_s += s->b;
      if (orientation * cert.b_of_s > static_cast<double>(cert.boundary)) {
        cert.iteration = engine_.iteration() + 1;
        return cert;
      }
    }
    return std::nullopt;
  };

  if (auto cert = sweep(positive, +1.0)) return *cert;
  if (auto cert = sweep(negative, -1.0)) return *cert;
  throw CertificateExtractionError("no sweep prefix satisfies |b(S)| > delta(S) at iteration " +
                                   std::to_string(engine_.iteration() + 1));
}

std::int64_t SingleSolver::update_weights(const StepFlow& f) {
  const std::int64_t stamp = engine_.iteration() + 1;
  touched_.clear();
  for (std::uint32_t id = 0; id < b_sites_; ++id) {
    sites_[id].stamp = stamp;
    touched_.push_back(id);
  }
  auto touch = [&](VertexId v, std::int64_t delta) {
    const std::uint32_t id = site(v);
    Site& s = sites_[id];
    if (s.stamp != stamp) {
      s.stamp = stamp;
      touched_.push_back(id);
    }
    s.net += delta;
  };
  for (const auto& [e, sign] : f.entries) {
    touch(g_.tail(e), sign);
    touch(g_.head(e), -sign);
    if (!flowed_[static_cast<std::size_t>(e)]) {
      flowed_[static_cast<std::size_t>(e)] = 1;
      flowed_edges_.push_back(e);
    }
    cum_flow_[static_cast<std::size_t>(e)] += sign;
  }

  gains_.clear();
  for (std::uint32_t id : touched_) {
    Site& s = sites_[id];
    s.r = (s.b - static_cast<double>(s.net)) / s.degree;
    gains_.emplace_back(s.plus, s.r);
    gains_.emplace_back(s.minus, -s.r);
  }
  engine_.step_slots(gains_);
  for (std::uint32_t id : touched_) {
    Site& s = sites_[id];
    s.cum_residual += s.r;
    s.net = 0;
    refresh(id);
  }
  return static_cast<std::int64_t>(touched_.size());
}

void SingleSolver::refresh(std::uint32_t id) {
  Site& s = sites_[id];
  const double phi =
      s.degree == 0 ? 0.0 : (engine_.rounded_weight_at(s.plus) - engine_.rounded_weight_at(s.minus)) / s.degree;
  auto by_vertex = [&](std::uint32_t a, VertexId v) { return sites_[a].v < v; };
  if (phi != 0.0 && s.phi == 0.0) {
    active_.insert(std::lower_bound(active_.begin(), active_.end(), s.v, by_vertex), id);
    active_volume_ += s.degree;
  } else if (phi == 0.0 && s.phi != 0.0) {
    active_.erase(std::lower_bound(active_.begin(), active_.end(), s.v, by_vertex));
    active_volume_ -= s.degree;
  }
  s.phi = phi;
}

void SingleSolver::override_weight(VertexId v, int sign, double value) {
  const std::uint32_t id = site(v);
  engine_.override_weight(index(v, sign), value);
  refresh(id);
}

IntegralFlow SingleSolver::accumulated_flow() const {
  IntegralFlow out;
  for (EdgeId e : flowed_edges_) {
    if (const std::int64_t c = cum_flow_[static_cast<std::size_t>(e)]; c != 0) out.emplace(e, c);
  }
  return out;
}

AuditSnapshot SingleSolver::audit_snapshot() const {
  AuditSnapshot snap;
  snap.iteration = engine_.iteration();
  snap.planned_iterations = planned_iterations();
  snap.alpha = alpha();
  snap.n = g_.vertex_count();
  CommodityAudit c;
  c.commodity = 0;
  c.l1 = stats_.l1;
  c.active_volume = active_volume_;
  for (const Site& s : sites_) c.residual_mass += std::abs(s.cum_residual) * s.degree;
  for (std::uint32_t id : active_) c.active.push_back({sites_[id].v, sites_[id].phi, sites_[id].cum_residual});
  snap.commodities.push_back(std::move(c));
  return snap;
}

std::optional<AuditViolation> SingleSolver::audit() { return audit_iteration(audit_snapshot(), stats_); }

SingleResult SingleSolver::solve() {
  if (auto cert = precheck(g_, b_)) {
    stats_.kind = ResultKind::Certificate;
    stats_.certificate_volume = cert->volume;
    return {*cert, stats_};
  }
  const std::int64_t t_max = planned_iterations();
  // With n = 1 there are no edges and precheck has already rejected any b != 0.
  if (g_.vertex_count() > 1) {
    while (engine_.iteration() < t_max) {
      const std::int64_t volume_now = active_volume_;
      const StepFlow f = flow_step();
      std::int64_t work = 1 + f.scanned;
      if (termination_check(f)) {
        try {
          CutCertificate cert = extract_certificate();
          stats_.charge(cert.volume);
          if (verify_cut_certificate(g_, b_, cert.set).ok) {
            stats_.record(volume_now, 0, f.scanned, work);
            stats_.kind = ResultKind::Certificate;
            stats_.certificate_volume = cert.volume;
            return {std::move(cert), stats_};
          }
        } catch (const CertificateExtractionError&) {
        }
        ++stats_.resumed_terminations;
      }
      const std::int64_t touched = update_weights(f);
      work += 2 * touched;
      stats_.record(volume_now, touched, f.scanned, work);
      if (options_.audit) audit();
    }
  }

  SingleFlowOutcome out;
  out.iterations = t_max;
  out.accumulated = accumulated_flow();
  for (const auto& [e, c] : out.accumulated) {
    out.flow.set(e, static_cast<double>(c) / static_cast<double>(t_max));
  }
  out.residual = residual(g_, b_, out.flow);
  stats_.kind = ResultKind::Flow;
  return {std::move(out), stats_};
}

SingleResult solve_single(const Graph& g, const SourceFunction& b, double eps, SolveOptions options) {
  SingleSolver solver(g, b, eps, options);
  return solver.solve();
}

}  // namespace localflow
