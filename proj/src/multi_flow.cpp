#include "localflow/multi_flow.hpp"

#include <algorithm>
#include <cmath>

namespace localflow {

KFlow MultiStepFlow::to_kflow(std::size_t k) const {
  KFlow f(k);
  for (const auto& entry : entries) f[static_cast<std::size_t>(entry.commodity)].set(entry.edge, entry.sign);
  return f;
}

std::optional<PotentialCertificate> precheck_multi(const Graph& g, const KSource& b) {
  for (std::size_t j = 0; j < b.k(); ++j) {
    for (const auto& [v, value] : b[j]) {
      if (std::abs(value) > g.degree(v)) {
        PotentialCertificate cert;
        cert.phi[{v, static_cast<std::int32_t>(j)}] = value > 0 ? 1.0 : -1.0;
        cert.lhs = std::abs(value);
        cert.rhs = g.degree(v);
        return cert;
      }
    }
  }
  return std::nullopt;
}

MultiSolver::MultiSolver(const Graph& g, KSource b, double eps, SolveOptions options)
    : g_(g),
      b_(std::move(b)),
      k_(b_.k()),
      options_(options),
      engine_(flow_mwu_params(g, eps, 2 * static_cast<std::uint64_t>(g.vertex_count()) *
                                          std::max<std::uint64_t>(b_.k(), 1)),
              /*track_gain_sums=*/false) {
  if (k_ == 0) throw std::invalid_argument("need at least one commodity");
  const auto n = static_cast<std::size_t>(g_.vertex_count());
  const auto m = static_cast<std::size_t>(g_.edge_count());
  site_of_ = ZeroedArray<std::uint32_t>(n * k_);
  node_of_ = ZeroedArray<std::uint32_t>(n);
  flowed_ = ZeroedArray<std::uint8_t>(m * k_);
  for (std::size_t j = 0; j < k_; ++j) cum_flow_.emplace_back(m);
  volumes_.assign(k_, 0);
  for (std::size_t j = 0; j < k_; ++j) {
    for (const auto& [v, value] : b_[j]) {
      if (!g_.contains_vertex(v)) {
        throw std::invalid_argument("source vertex " + std::to_string(v) + " out of range");
      }
      if (!std::isfinite(value)) {
        throw std::invalid_argument("source value at " + std::to_string(v) + " is not finite");
      }
      sites_[site(v, static_cast<std::int32_t>(j))].b = value;
    }
    commodity_l1_.push_back(b_[j].l1());
  }
  b_sites_ = sites_.size();
  const Norms nb = norms(b_);
  stats_.planned_iterations = engine_.params().iterations;
  stats_.l0 = nb.l0;
  stats_.l1 = nb.l1;
  stats_.alpha = engine_.params().alpha;
  stats_.n = g_.vertex_count();
  stats_.m = g_.edge_count();
  stats_.k = static_cast<std::int64_t>(k_);
}

std::uint32_t MultiSolver::site(VertexId v, std::int32_t j) {
  std::uint32_t& slot = site_of_[key(v, j)];
  if (slot == 0) {
    const WeightLedger::Slot plus = engine_.slot(index(v, j, +1));
    const WeightLedger::Slot minus = engine_.slot(index(v, j, -1));
    const std::uint32_t n = node(v);
    sites_.push_back(Site{v, j, static_cast<std::int32_t>(g_.degree(v)), n, 0.0, plus, minus});
    slot = static_cast<std::uint32_t>(sites_.size());
  }
  return slot - 1;
}

std::uint32_t MultiSolver::node(VertexId v) {
  std::uint32_t& slot = node_of_[static_cast<std::size_t>(v)];
  if (slot == 0) {
    nodes_.push_back(Node{v, {}});
    slot = static_cast<std::uint32_t>(nodes_.size());
  }
  return slot - 1;
}

double MultiSolver::rounded_potential(VertexId v, std::int32_t j) const {
  if (g_.degree(v) == 0) return 0.0;
  const double plus = engine_.rounded_weight(index(v, j, +1));
  const double minus = engine_.rounded_weight(index(v, j, -1));
  return (plus - minus) / g_.degree(v);
}

double MultiSolver::cumulative_residual(VertexId v, std::int32_t j) const {
  const Site* s = find_site(v, j);
  return s ? s->cum_residual : 0.0;
}

std::vector<VertexId> MultiSolver::active_set(std::int32_t j) const {
  std::vector<VertexId> out;
  for (std::uint32_t n : active_nodes_) {
    for (std::uint32_t id : nodes_[n].active) {
      if (sites_[id].j == j) out.push_back(nodes_[n].v);
    }
  }
  return out;
}

std::int64_t MultiSolver::total_active_volume() const {
  std::int64_t total = 0;
  for (std::int64_t vol : volumes_) total += vol;
  return total;
}

MultiStepFlow MultiSolver::flow_step() const {
  static const std::vector<std::uint32_t> kNone;
  MultiStepFlow f;
  for (std::uint32_t n : active_nodes_) {
    const VertexId v = nodes_[n].v;
    const std::vector<std::uint32_t>& list_v = nodes_[n].active;
    for (const Incidence& inc : g_.incidences(v)) {
      ++f.scanned;
      const VertexId w = g_.other(inc.edge, v);
      const Node* other = find_node(w);
      const bool other_active = other && !other->active.empty();
      if (other_active && w < v) continue;
      const std::vector<std::uint32_t>& list_w = other_active ? other->active : kNone;
      const std::vector<std::uint32_t>& tail = inc.sign > 0 ? list_v : list_w;
      const std::vector<std::uint32_t>& head = inc.sign > 0 ? list_w : list_v;

      // Merge the two commodity-sorted lists; strict improvement keeps the
      // smallest commodity among ties.
      double best = 0.0;
      double best_diff = 0.0;
      std::int32_t best_j = -1;
      std::size_t a = 0;
      std::size_t c = 0;
      while (a < tail.size() || c < head.size()) {
        const Site* st = a < tail.size() ? &sites_[tail[a]] : nullptr;
        const Site* sh = c < head.size() ? &sites_[head[c]] : nullptr;
        std::int32_t j;
        double phi_tail = 0.0;
        double phi_head = 0.0;
        if (!sh || (st && st->j < sh->j)) {
          j = st->j;
          phi_tail = st->phi;
          ++a;
        } else if (!st || sh->j < st->j) {
          j = sh->j;
          phi_head = sh->phi;
          ++c;
        } else {
          j = st->j;
          phi_tail = st->phi;
          phi_head = sh->phi;
          ++a;
          ++c;
        }
        const double diff = phi_tail - phi_head;
        if (std::abs(diff) > best) {
          best = std::abs(diff);
          best_diff = diff;
          best_j = j;
        }
      }
      f.potential_gap += best;
      if (best_j >= 0) {
        f.entries.push_back({inc.edge, best_j, static_cast<std::int8_t>(best_diff > 0 ? 1 : -1)});
      }
    }
  }
  return f;
}

bool MultiSolver::termination_check(const MultiStepFlow& f) const {
  double lhs = 0.0;
  for (std::uint32_t n : active_nodes_) {
    for (std::uint32_t id : nodes_[n].active) lhs += sites_[id].phi * sites_[id].b;
  }
  return exceeds_with_tolerance(lhs, f.potential_gap);
}

PotentialCertificate MultiSolver::current_certificate(const MultiStepFlow& f) const {
  PotentialCertificate cert;
  for (std::uint32_t n : active_nodes_) {
    for (std::uint32_t id : nodes_[n].active) {
      const Site& s = sites_[id];
      cert.phi[{s.v, s.j}] = s.phi;
      cert.lhs += s.phi * s.b;
    }
  }
  cert.rhs = f.potential_gap;
  cert.iteration = engine_.iteration() + 1;
  return cert;
}

std::int64_t MultiSolver::update_weights(const MultiStepFlow& f) {
  const std::int64_t stamp = engine_.iteration() + 1;
  touched_.clear();
  for (std::uint32_t id = 0; id < b_sites_; ++id) {
    sites_[id].stamp = stamp;
    touched_.push_back(id);
  }
  auto touch = [&](VertexId v, std::int32_t j, std::int64_t delta) {
    const std::uint32_t id = site(v, j);
    Site& s = sites_[id];
    if (s.stamp != stamp) {
      s.stamp = stamp;
      touched_.push_back(id);
    }
    s.net += delta;
  };
  for (const auto& [e, j, sign] : f.entries) {
    touch(g_.tail(e), j, sign);
    touch(g_.head(e), j, -sign);
    const std::size_t flat = static_cast<std::size_t>(e) * k_ + static_cast<std::size_t>(j);
    if (!flowed_[flat]) {
      flowed_[flat] = 1;
      flowed_edges_.emplace_back(j, e);
    }
    cum_flow_[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)] += sign;
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

void MultiSolver::refresh(std::uint32_t id) {
  Site& s = sites_[id];
  const double phi =
      s.degree == 0 ? 0.0 : (engine_.rounded_weight_at(s.plus) - engine_.rounded_weight_at(s.minus)) / s.degree;
  const bool was_active = s.phi != 0.0;
  s.phi = phi;
  if ((phi != 0.0) == was_active) return;

  const std::uint32_t n = s.node;
  std::vector<std::uint32_t>& list = nodes_[n].active;
  auto by_commodity = [&](std::uint32_t a, std::int32_t j) { return sites_[a].j < j; };
  auto by_vertex = [&](std::uint32_t a, VertexId v) { return nodes_[a].v < v; };
  std::int64_t& vol = volumes_[static_cast<std::size_t>(s.j)];
  if (phi != 0.0) {
    if (list.empty()) {
      active_nodes_.insert(std::lower_bound(active_nodes_.begin(), active_nodes_.end(), s.v, by_vertex), n);
    }
    list.insert(std::lower_bound(list.begin(), list.end(), s.j, by_commodity), id);
    vol += s.degree;
  } else {
    list.erase(std::lower_bound(list.begin(), list.end(), s.j, by_commodity));
    vol -= s.degree;
    if (list.empty()) {
      active_nodes_.erase(std::lower_bound(active_nodes_.begin(), active_nodes_.end(), s.v, by_vertex));
    }
  }
}

void MultiSolver::override_weight(VertexId v, std::int32_t j, int sign, double value) {
  const std::uint32_t id = site(v, j);
  engine_.override_weight(index(v, j, sign), value);
  refresh(id);
}

std::vector<IntegralFlow> MultiSolver::accumulated_flow() const {
  std::vector<IntegralFlow> out(k_);
  for (const auto& [j, e] : flowed_edges_) {
    const auto jj = static_cast<std::size_t>(j);
    if (const std::int64_t c = cum_flow_[jj][static_cast<std::size_t>(e)]; c != 0) out[jj].emplace(e, c);
  }
  return out;
}

AuditSnapshot MultiSolver::audit_snapshot() const {
  AuditSnapshot snap;
  snap.iteration = engine_.iteration();
  snap.planned_iterations = planned_iterations();
  snap.alpha = alpha();
  snap.n = g_.vertex_count();
  snap.commodities.resize(k_);
  for (std::size_t j = 0; j < k_; ++j) {
    snap.commodities[j].commodity = static_cast<std::int64_t>(j);
    snap.commodities[j].l1 = commodity_l1_[j];
    snap.commodities[j].active_volume = volumes_[j];
  }
  for (const Site& s : sites_) {
    snap.commodities[static_cast<std::size_t>(s.j)].residual_mass += std::abs(s.cum_residual) * s.degree;
  }
  for (std::uint32_t n : active_nodes_) {
    for (std::uint32_t id : nodes_[n].active) {
      const Site& s = sites_[id];
      snap.commodities[static_cast<std::size_t>(s.j)].active.push_back({s.v, s.phi, s.cum_residual});
    }
  }
  return snap;
}

std::optional<AuditViolation> MultiSolver::audit() { return audit_iteration(audit_snapshot(), stats_); }

MultiResult MultiSolver::solve() {
  if (auto cert = precheck_multi(g_, b_)) {
    stats_.kind = ResultKind::Certificate;
    return {*cert, stats_};
  }
  const std::int64_t t_max = planned_iterations();
  if (g_.vertex_count() > 1) {
    while (engine_.iteration() < t_max) {
      const std::int64_t volume_now = total_active_volume();
      const MultiStepFlow f = flow_step();
      std::int64_t work = 1 + f.scanned;
      if (termination_check(f)) {
        PotentialCertificate cert = current_certificate(f);
        if (verify_potential_certificate(g_, b_, cert.phi).ok) {
          stats_.record(volume_now, 0, f.scanned, work);
          stats_.kind = ResultKind::Certificate;
          return {std::move(cert), stats_};
        }
        ++stats_.resumed_terminations;
      }
      const std::int64_t touched = update_weights(f);
      work += 2 * touched;
      stats_.record(volume_now, touched, f.scanned, work);
      if (options_.audit) audit();
    }
  }

  MultiFlowOutcome out;
  out.iterations = t_max;
  out.accumulated = accumulated_flow();
  out.flow = KFlow(k_);
  for (std::size_t j = 0; j < k_; ++j) {
    for (const auto& [e, c] : out.accumulated[j]) {
      out.flow[j].set(e, static_cast<double>(c) / static_cast<double>(t_max));
    }
    out.residuals.push_back(residual(g_, b_[j], out.flow[j]));
  }
  stats_.kind = ResultKind::Flow;
  return {std::move(out), stats_};
}

MultiResult solve_multi(const Graph& g, const KSource& b, double eps, SolveOptions options) {
  MultiSolver solver(g, b, eps, options);
  return solver.solve();
}

}  // namespace localflow
