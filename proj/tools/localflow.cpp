#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "localflow/generators.hpp"
#include "localflow/instrumentation.hpp"
#include "localflow/io.hpp"
#include "localflow/multi_flow.hpp"
#include "localflow/single_flow.hpp"
#include "localflow/verify.hpp"

using namespace localflow;

namespace {

constexpr int kExitFlow = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCertificate = 2;
constexpr int kExitVerifyFailed = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(path, 0, err.what());
  }
}

void check_eps(double eps) {
  if (!std::isfinite(eps) || !(eps > 0.0 && eps < 1.0)) {
    throw UsageError("--eps must lie in (0, 1), got " + std::to_string(eps));
  }
}

// solve

struct SolveArgs {
  std::string graph;
  std::string demand;
  double eps = 0.1;
  bool audit = false;
  bool multi = false;
  std::string out;
  std::string stats;
};

int run_solve(const SolveArgs& a) {
  check_eps(a.eps);
  const Graph g = read_graph_file(a.graph);
  const KSource b = read_demand_file(a.demand, g.vertex_count());
  const SolveOptions options{.audit = a.audit};

  nlohmann::json artifact;
  RunStats stats;
  bool certificate = false;
  if (b.k() == 1 && !a.multi) {
    const SingleResult r = solve_single(g, b[0], a.eps, options);
    artifact = to_artifact(g, r, a.eps);
    stats = r.stats;
    certificate = r.is_certificate();
  } else {
    const MultiResult r = solve_multi(g, b, a.eps, options);
    artifact = to_artifact(g, r, a.eps);
    stats = r.stats;
    certificate = r.is_certificate();
  }
  write_text(a.out, artifact.dump(2) + "\n");
  if (!a.stats.empty()) write_text(a.stats, report(stats).dump(2) + "\n");
  if (a.audit && !stats.violations.empty()) {
    std::cerr << stats.violations.size() << " audit violation(s); first: " << stats.violations.front().kind
              << " at iteration " << stats.violations.front().iteration << "\n";
  }
  return certificate ? kExitCertificate : kExitFlow;
}

// verify

struct VerifyArgs {
  std::string graph;
  std::string demand;
  std::string artifact;
  std::optional<double> eps;
};

int run_verify(const VerifyArgs& a) {
  const Graph g = read_graph_file(a.graph);
  const KSource b = read_demand_file(a.demand, g.vertex_count());
  const nlohmann::json artifact = read_json_file(a.artifact);
  if (!artifact.is_object() || !artifact.contains("kind")) throw ParseError(a.artifact, 0, "missing 'kind'");

  double eps = 0.1;
  if (a.eps) {
    eps = *a.eps;
  } else if (artifact.contains("eps")) {
    eps = artifact.at("eps").get<double>();
  }
  check_eps(eps);

  VerifyReport report;
  try {
    report = verify_artifact(g, b, artifact, eps);
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(a.artifact, 0, err.what());
  }
  if (report.ok) {
    std::cout << "ok " << artifact.at("kind").get<std::string>() << "\n";
    return kExitFlow;
  }
  std::cout << "FAILED " << artifact.at("kind").get<std::string>() << "\n";
  for (const Violation& v : report.violations) {
    std::cout << "  " << v.kind << " " << v.location << ": measured " << v.measured << ", bound " << v.bound << "\n";
  }
  return kExitVerifyFailed;
}

// gen

struct GenArgs {
  std::string kind;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t d = 4;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string demand_out;
  std::vector<double> pairs;
  std::vector<double> balanced;
  std::size_t commodities = 1;
};

Graph generate_graph(const GenArgs& a) {
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw UsageError(a.kind + " needs " + what);
  };
  if (a.kind == "path") {
    need(a.n >= 1, "--n >= 1");
    return path_graph(a.n);
  }
  if (a.kind == "grid") {
    need(a.rows >= 1 && a.cols >= 1, "--rows and --cols >= 1");
    return grid_graph(a.rows, a.cols);
  }
  if (a.kind == "random-regular") {
    need(a.n > a.d && a.d >= 1 && (a.n * a.d) % 2 == 0, "--n > --d with n*d even");
    return random_regular_graph(a.n, a.d, a.seed);
  }
  need(a.n >= 2 && a.m >= 0 && a.m <= a.n * (a.n - 1) / 2, "--n >= 2 and 0 <= --m <= n(n-1)/2");
  return random_gnm_graph(a.n, a.m, a.seed);
}

KSource generate_demand(const GenArgs& a, const Graph& g) {
  if (!a.pairs.empty()) {
    if (a.pairs.size() % 4 != 0) throw UsageError("--pairs takes groups of 'k s t d'");
    std::vector<DemandPair> pairs;
    for (std::size_t i = 0; i < a.pairs.size(); i += 4) {
      const auto j = static_cast<std::int64_t>(a.pairs[i]);
      const auto s = static_cast<VertexId>(a.pairs[i + 1]);
      const auto t = static_cast<VertexId>(a.pairs[i + 2]);
      if (j < 1 || !g.contains_vertex(s) || !g.contains_vertex(t)) {
        throw UsageError("pair " + std::to_string(i / 4 + 1) + " names a bad commodity or vertex");
      }
      pairs.push_back({j, s, t, a.pairs[i + 3]});
    }
    return pairs_demand(pairs);
  }
  if (a.balanced.size() != 2) throw UsageError("--random-balanced takes 'l0 l1'");
  const auto l0 = static_cast<std::size_t>(a.balanced[0]);
  Rng rng(a.seed ^ 0x9e3779b97f4a7c15ULL);
  KSource b(a.commodities);
  for (auto& bj : b.commodities) {
    try {
      bj = random_balanced_demand(g, l0, a.balanced[1], rng);
    } catch (const std::invalid_argument& err) {
      throw UsageError(err.what());
    }
  }
  return b;
}

int run_gen(const GenArgs& a) {
  const Graph g = generate_graph(a);
  std::ostringstream graph_text;
  write_graph(graph_text, g);
  write_text(a.out, graph_text.str());
  if (!a.pairs.empty() || !a.balanced.empty()) {
    if (a.demand_out.empty()) throw UsageError("a demand spec needs --demand-out");
    std::ostringstream demand_text;
    write_demand(demand_text, generate_demand(a, g));
    write_text(a.demand_out, demand_text.str());
  }
  return kExitFlow;
}

// bench

struct BenchArgs {
  std::string sweep;
  std::uint64_t seed = 1;
  std::int64_t max_m = 200000;
  double eps = 0.2;
};

struct BenchRow {
  std::int64_t m;
  double eps;
  std::int64_t iterations;
  std::int64_t work;
  const char* result;
};

BenchRow bench_once(const Graph& g, const SourceFunction& b, double eps) {
  const SingleResult r = solve_single(g, b, eps);
  return {g.edge_count(), eps, r.stats.iterations_run(), r.stats.total_work,
          r.is_certificate() ? "certificate" : "flow"};
}

void print_rows(const std::vector<BenchRow>& rows) {
  std::printf("%12s %8s %12s %14s  %s\n", "m", "eps", "iterations", "work", "result");
  for (const BenchRow& r : rows) {
    std::printf("%12lld %8.4f %12lld %14lld  %s\n", static_cast<long long>(r.m), r.eps,
                static_cast<long long>(r.iterations), static_cast<long long>(r.work), r.result);
  }
}

// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int run_bench(const BenchArgs& a) {
  std::vector<BenchRow> rows;
  if (a.sweep == "m") {
    check_eps(a.eps);
    for (std::int64_t m = 2000; m <= a.max_m; m *= 10) {
      const Graph g = random_regular_graph(m / 2, 4, a.seed + static_cast<std::uint64_t>(m));
      Rng rng(a.seed * 31 + static_cast<std::uint64_t>(m));
      rows.push_back(bench_once(g, random_balanced_demand(g, 20, 10.0, rng), a.eps));
    }
    print_rows(rows);
    std::int64_t lo = rows.front().work;
    std::int64_t hi = rows.front().work;
    for (const BenchRow& r : rows) {
      lo = std::min(lo, r.work);
      hi = std::max(hi, r.work);
    }
    std::printf("work spread max/min = %.3f over m = %lld..%lld\n", static_cast<double>(hi) / static_cast<double>(lo),
                static_cast<long long>(rows.front().m), static_cast<long long>(rows.back().m));
  } else if (a.sweep == "eps") {
    const Graph g = random_regular_graph(10000, 4, a.seed);
    Rng rng(a.seed * 17);
    const SourceFunction b = random_balanced_demand(g, 20, 60.0, rng);
    std::vector<double> inv_eps;
    std::vector<double> work;
    for (double eps : {0.4, 0.2, 0.1}) {
      rows.push_back(bench_once(g, b, eps));
      inv_eps.push_back(1.0 / eps);
      work.push_back(static_cast<double>(rows.back().work));
    }
    print_rows(rows);
    const double slope = log_log_slope(inv_eps, work);
    std::printf("log-log slope of work in 1/eps = %.3f (growth per halving = %.2fx)\n", slope, std::exp2(slope));
  } else if (a.sweep == "zero") {
    check_eps(a.eps);
    for (std::int64_t m = 2000; m <= a.max_m; m *= 10) {
      const Graph g = random_regular_graph(m / 2, 4, a.seed + static_cast<std::uint64_t>(m));
      rows.push_back(bench_once(g, SourceFunction{}, a.eps));
    }
    print_rows(rows);
    for (const BenchRow& r : rows) {
      std::printf("m=%lld work/iterations = %.3f\n", static_cast<long long>(r.m),
                  static_cast<double>(r.work) / static_cast<double>(r.iterations));
    }
  } else {
    throw UsageError("unknown sweep '" + a.sweep + "'");
  }
  return kExitFlow;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local approximate flow solver with verifiable certificates"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Route a demand or certify that it cannot be routed");
  solve_cmd->add_option("graph", solve.graph, "Graph file")->required();
  solve_cmd->add_option("demand", solve.demand, "Demand file")->required();
  solve_cmd->add_option("--eps", solve.eps, "Approximation parameter in (0, 1)")->capture_default_str();
  solve_cmd->add_flag("--audit", solve.audit, "Check the locality invariants every iteration");
  solve_cmd->add_flag("--multi", solve.multi, "Use the multi-commodity solver even when k = 1");
  solve_cmd->add_option("--out", solve.out, "Artifact output path (default stdout)");
  solve_cmd->add_option("--stats", solve.stats, "Write the run report as JSON");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a flow or certificate artifact");
  verify_cmd->add_option("graph", verify.graph, "Graph file")->required();
  verify_cmd->add_option("demand", verify.demand, "Demand file")->required();
  verify_cmd->add_option("artifact", verify.artifact, "Artifact file")->required();
  verify_cmd->add_option("--eps", verify.eps, "Residual tolerance (default: the artifact's eps)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a graph and optionally a demand");
  gen_cmd->add_option("kind", gen.kind, "Graph family")
      ->required()
      ->check(CLI::IsMember({"path", "grid", "random-regular", "random-gnm"}));
  gen_cmd->add_option("--n", gen.n, "Vertex count");
  gen_cmd->add_option("--m", gen.m, "Edge count (random-gnm)");
  gen_cmd->add_option("--d", gen.d, "Degree (random-regular)")->capture_default_str();
  gen_cmd->add_option("--rows", gen.rows, "Grid rows");
  gen_cmd->add_option("--cols", gen.cols, "Grid columns");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Graph output path (default stdout)");
  gen_cmd->add_option("--demand-out", gen.demand_out, "Demand output path");
  auto* pairs_opt = gen_cmd->add_option("--pairs", gen.pairs, "Demand pairs as repeated 'k s t d' groups");
  gen_cmd->add_option("--random-balanced", gen.balanced, "Sparse balanced demand 'l0 l1' per commodity")
      ->expected(2)
      ->excludes(pairs_opt);
  gen_cmd->add_option("--k", gen.commodities, "Commodities for --random-balanced")->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Work-unit scaling sweeps");
  bench_cmd->add_option("sweep", bench.sweep, "m, eps or zero")->required()->check(CLI::IsMember({"m", "eps", "zero"}));
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--max-m", bench.max_m, "Largest edge count in m sweeps")->capture_default_str();
  bench_cmd->add_option("--eps", bench.eps, "eps for the m and zero sweeps")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*verify_cmd) return run_verify(verify);
    if (*gen_cmd) return run_gen(gen);
    return run_bench(bench);
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
  }
  return kExitUsage;
}
