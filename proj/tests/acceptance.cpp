// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "adversary.hpp"
#include "corpus.hpp"
#include "localflow/generators.hpp"
#include "localflow/multi_flow.hpp"
#include "localflow/single_flow.hpp"
#include "localflow/verify.hpp"

using namespace localflow;
using test::Instance;

namespace {

constexpr std::uint64_t kResidualCorpus = 500;
constexpr std::uint64_t kCertificateCorpus = 300;
constexpr std::uint64_t kCollapseCorpus = 200;
constexpr std::uint64_t kMwuSeeds = 100;

struct Outcome {
  bool certificate = false;
  bool cut = false;
  CutCertificate cut_cert;
  PotentialCertificate potential;
  std::vector<IntegralFlow> accumulated;
  KFlow flow;
  std::int64_t iterations = 0;
  RunStats stats;
};

// k = 1 goes through the single solver on even seeds, the multi solver on odd.
Outcome run(const Instance& inst, bool audit) {
  Outcome out;
  const SolveOptions options{.audit = audit};
  if (inst.demand.k() == 1 && inst.seed % 2 == 0) {
    SingleResult r = solve_single(inst.graph, inst.demand[0], inst.eps, options);
    out.stats = r.stats;
    out.certificate = r.is_certificate();
    if (out.certificate) {
      out.cut = true;
      out.cut_cert = r.certificate();
    } else {
      out.accumulated = {r.flow().accumulated};
      out.flow = KFlow({r.flow().flow});
      out.iterations = r.flow().iterations;
    }
    return out;
  }
  MultiResult r = solve_multi(inst.graph, inst.demand, inst.eps, options);
  out.stats = r.stats;
  out.certificate = r.is_certificate();
  if (out.certificate) {
    out.potential = r.certificate();
  } else {
    out.accumulated = r.flow().accumulated;
    out.flow = r.flow().flow;
    out.iterations = r.flow().iterations;
  }
  return out;
}

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Line> lines;
std::int64_t audit_violations = 0;
std::int64_t audited_runs = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void residual_and_congestion() {
  const auto start = std::chrono::steady_clock::now();
  std::int64_t flows = 0;
  std::int64_t residual_failures = 0;
  std::int64_t congestion_failures = 0;
  double worst_ratio = 0.0;  // max |r| / (eps deg)
  for (std::uint64_t seed = 0; seed < kResidualCorpus; ++seed) {
    const Instance inst = test::residual_instance(seed);
    const Outcome out = run(inst, true);
    ++audited_runs;
    audit_violations += static_cast<std::int64_t>(out.stats.violations.size());
    if (out.certificate) continue;
    ++flows;
    const Graph& g = inst.graph;
    for (std::size_t j = 0; j < inst.demand.k(); ++j) {
      const SourceFunction r = residual(g, inst.demand[j], out.flow[j]);
      for (const auto& [v, value] : r) {
        const double bound = inst.eps * g.degree(v);
        worst_ratio = std::max(worst_ratio, std::abs(value) / bound);
        if (!(std::abs(value) <= bound + 1e-9)) ++residual_failures;
      }
    }
    // Integer accumulators: sum_j |c_j(e)| <= T, and every f_j(e) is c_j(e) / T.
    std::map<EdgeId, std::int64_t> load;
    for (std::size_t j = 0; j < out.accumulated.size(); ++j) {
      for (const auto& [e, c] : out.accumulated[j]) {
        load[e] += std::abs(c);
        if (out.flow[j].get(e) != static_cast<double>(c) / static_cast<double>(out.iterations)) ++congestion_failures;
      }
      if (out.flow[j].size() != out.accumulated[j].size()) ++congestion_failures;
    }
    for (const auto& [e, total] : load) {
      if (total > out.iterations) ++congestion_failures;
    }
  }
  const double elapsed = seconds_since(start);
  lines.push_back({1, "residual guarantee", residual_failures == 0 && flows > 0,
                   fmt("%lld flows over %llu instances, %lld violations, worst |r|/(eps deg) = %.4f",
                       static_cast<long long>(flows), static_cast<unsigned long long>(kResidualCorpus),
                       static_cast<long long>(residual_failures), worst_ratio),
                   elapsed});
  lines.push_back({2, "congestion exactness", congestion_failures == 0 && flows > 0,
                   fmt("%lld flows, %lld edges over T", static_cast<long long>(flows),
                       static_cast<long long>(congestion_failures)),
                   elapsed});
}

void certificates() {
  const auto start = std::chrono::steady_clock::now();
  std::int64_t cuts = 0;
  std::int64_t potentials = 0;
  std::int64_t unsound = 0;
  std::int64_t oracle_checked = 0;
  std::int64_t oracle_disagree = 0;
  std::int64_t volume_failures = 0;
  double worst_volume_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < kCertificateCorpus; ++seed) {
    const Instance inst = test::certificate_instance(seed);
    const Outcome out = run(inst, true);
    ++audited_runs;
    audit_violations += static_cast<std::int64_t>(out.stats.violations.size());
    if (!out.certificate) continue;
    if (out.cut) {
      ++cuts;
      if (!verify_cut_certificate(inst.graph, inst.demand[0], out.cut_cert.set).ok) ++unsound;
      const double bound = out.stats.volume_bound();
      worst_volume_ratio = std::max(worst_volume_ratio, static_cast<double>(out.cut_cert.volume) / bound);
      if (static_cast<double>(out.cut_cert.volume) > bound) ++volume_failures;
      if (volume(inst.graph, out.cut_cert.set) != out.cut_cert.volume) ++volume_failures;
    } else {
      ++potentials;
      if (!verify_potential_certificate(inst.graph, inst.demand, out.potential.phi).ok) ++unsound;
      if (!(out.potential.lhs > out.potential.rhs)) ++unsound;
    }
    if (inst.integral) {
      ++oracle_checked;
      if (oracle_feasible_single(inst.graph, inst.demand[0], 1)) ++oracle_disagree;
    }
  }
  const double elapsed = seconds_since(start);
  lines.push_back({3, "certificate soundness", unsound == 0 && oracle_disagree == 0 && cuts > 0 && potentials > 0,
                   fmt("%lld cut + %lld potential certificates, %lld unsound; %lld oracle-checked, %lld feasible",
                       static_cast<long long>(cuts), static_cast<long long>(potentials),
                       static_cast<long long>(unsound), static_cast<long long>(oracle_checked),
                       static_cast<long long>(oracle_disagree)),
                   elapsed});
  lines.push_back({7, "certificate volume", volume_failures == 0 && cuts > 0,
                   fmt("%lld cut certificates, %lld over T*l1*alpha/ln n, worst ratio %.4f",
                       static_cast<long long>(cuts), static_cast<long long>(volume_failures), worst_volume_ratio),
                   elapsed});
}

void mwu_bound() {
  const auto start = std::chrono::steady_clock::now();
  std::int64_t runs = 0;
  std::int64_t failures = 0;
  double worst = 0.0;  // max average gain / (5 alpha)
  for (std::uint64_t j : {2u, 10u, 100u}) {
    for (double alpha : {0.25, 0.125, 0.0625}) {
      for (std::uint64_t seed = 0; seed < kMwuSeeds; ++seed) {
        // Alternate exact weights (threshold 0) with rounding at |J|.
        const double threshold = seed % 4 < 2 ? 0.0 : static_cast<double>(j);
        test::Adversary adversary(j, 1000 * j + seed, seed % 2 == 0);
        const auto params = MwuParams::with_iterations(alpha, j, threshold, threshold);
        const MwuReport report = run_mwu(params, [&](std::int64_t, const WeightLedger& w, const RoundedWeights& wt) {
          return adversary.next(w, wt);
        });
        ++runs;
        worst = std::max(worst, report.max_average_gain / (5 * alpha));
        if (report.max_average_gain > 5 * alpha) ++failures;
      }
    }
  }
  lines.push_back({4, "MWU average gain <= 5 alpha", failures == 0,
                   fmt("%lld runs, %lld failures, worst gain/(5 alpha) = %.4f", static_cast<long long>(runs),
                       static_cast<long long>(failures), worst),
                   seconds_since(start)});
}

void sublinear_work() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::int64_t> work;
  std::string table;
  for (std::int64_t m : {2000, 20000, 200000, 2000000}) {
    const Graph g = random_regular_graph(m / 2, 4, 0xab + static_cast<std::uint64_t>(m));
    Rng rng(0xcd + static_cast<std::uint64_t>(m));
    const SourceFunction b = random_balanced_demand(g, 20, 10.0, rng);
    const SingleResult r = solve_single(g, b, 0.2);
    work.push_back(r.stats.total_work);
    table += fmt(" m=%lld:%lld%s", static_cast<long long>(m), static_cast<long long>(r.stats.total_work),
                 r.is_certificate() ? "(cert)" : "");
  }
  const auto [lo, hi] = std::minmax_element(work.begin(), work.end());
  const double spread = static_cast<double>(*hi) / static_cast<double>(*lo);
  lines.push_back({6, "sublinear work", spread < 2.0, fmt("max/min = %.3f;", spread) + table, seconds_since(start)});
}

void k1_collapse() {
  const auto start = std::chrono::steady_clock::now();
  std::int64_t mismatches = 0;
  std::int64_t flows = 0;
  for (std::uint64_t seed = 0; seed < kCollapseCorpus; ++seed) {
    Rng rng(0xc011a95e + seed);
    const std::int64_t n = 8 + static_cast<std::int64_t>(rng.below(113));
    const Graph g = test::random_graph(n, rng);
    const KSource b = test::random_demand(g, 1, rng);
    const double eps = seed % 2 == 0 ? 0.3 : 0.2;
    const SingleResult s = solve_single(g, b[0], eps, {.audit = true});
    const MultiResult m = solve_multi(g, b, eps, {.audit = true});
    audited_runs += 2;
    audit_violations += static_cast<std::int64_t>(s.stats.violations.size() + m.stats.violations.size());
    if (s.is_certificate() != m.is_certificate()) {
      ++mismatches;
      continue;
    }
    if (s.is_certificate()) {
      if (s.certificate().iteration != m.certificate().iteration) ++mismatches;
      continue;
    }
    ++flows;
    if (s.flow().accumulated != m.flow().accumulated[0]) ++mismatches;
    if (!(s.flow().flow == m.flow().flow[0])) ++mismatches;
    if (s.stats.total_work != m.stats.total_work) ++mismatches;
  }
  lines.push_back({8, "k=1 collapse", mismatches == 0 && flows > 0,
                   fmt("%llu instances (%lld flows), %lld mismatches", static_cast<unsigned long long>(kCollapseCorpus),
                       static_cast<long long>(flows), static_cast<long long>(mismatches)),
                   seconds_since(start)});
}

}  // namespace

int main() {
  residual_and_congestion();
  certificates();
  mwu_bound();
  const auto audit_start = std::chrono::steady_clock::now();
  k1_collapse();
  const double collapse_seconds = seconds_since(audit_start);
  lines.push_back({5, "locality audits", audit_violations == 0 && audited_runs > 0,
                   fmt("%lld audited runs, %lld violations", static_cast<long long>(audited_runs),
                       static_cast<long long>(audit_violations)),
                   lines[0].seconds + lines[2].seconds + collapse_seconds});
  sublinear_work();

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  bool all = true;
  for (const Line& l : lines) {
    all = all && l.pass;
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", l.pass ? "PASS" : "FAIL", l.id, l.name.c_str(), l.detail.c_str(),
                l.seconds);
  }
  return all ? 0 : 1;
}
