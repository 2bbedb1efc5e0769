#include "localflow/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace localflow {
namespace {

// Tokenized non-empty lines with their 1-based line numbers.
struct Line {
  std::int64_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::int64_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
    std::istringstream ss(text);
    Line line{number, {}};
    std::string tok;
    while (ss >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::int64_t parse_int(const std::string& tok, const std::string& source, std::int64_t line,
                       const char* what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(source, line, std::string("expected integer ") + what + ", got '" + tok + "'");
  }
  return value;
}

double parse_real(const std::string& tok, const std::string& source, std::int64_t line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || !std::isfinite(value)) {
    throw ParseError(source, line, "expected finite real value, got '" + tok + "'");
  }
  return value;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

}  // namespace

Graph read_graph(std::istream& in, const std::string& source) {
  const std::vector<Line> lines = tokenize(in);
  if (lines.empty()) throw ParseError(source, 0, "empty graph file");
  const Line& header = lines.front();
  if (header.tokens.size() != 2) throw ParseError(source, header.number, "header must be 'n m'");
  const std::int64_t n = parse_int(header.tokens[0], source, header.number, "n");
  const std::int64_t m = parse_int(header.tokens[1], source, header.number, "m");
  if (n < 1) throw ParseError(source, header.number, "n must be >= 1");
  if (m < 0) throw ParseError(source, header.number, "m must be >= 0");
  if (static_cast<std::int64_t>(lines.size()) - 1 != m) {
    throw ParseError(source, header.number,
                     "header declares " + std::to_string(m) + " edges but file has " +
                         std::to_string(lines.size() - 1));
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.tokens.size() != 2) throw ParseError(source, line.number, "edge line must be 'u v'");
    const std::int64_t u = parse_int(line.tokens[0], source, line.number, "u");
    const std::int64_t v = parse_int(line.tokens[1], source, line.number, "v");
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw ParseError(source, line.number, "endpoint outside [0, " + std::to_string(n) + ")");
    }
    if (u == v) throw ParseError(source, line.number, "self-loop at vertex " + std::to_string(u));
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  return Graph::build(n, edges);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in = open(path);
  return read_graph(in, path);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (EdgeId e = 0; e < g.edge_count(); ++e) out << g.tail(e) << ' ' << g.head(e) << '\n';
}

KSource read_demand(std::istream& in, std::int64_t vertex_count, const std::string& source) {
  const std::vector<Line> lines = tokenize(in);
  if (lines.empty()) throw ParseError(source, 0, "empty demand file");
  const Line& header = lines.front();
  if (header.tokens.size() != 1) throw ParseError(source, header.number, "header must be 'k'");
  const std::int64_t k = parse_int(header.tokens[0], source, header.number, "k");
  if (k < 1) throw ParseError(source, header.number, "k must be >= 1");
  KSource b(static_cast<std::size_t>(k));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    std::int64_t j = 1;
    std::size_t at = 0;
    if (line.tokens.size() == 3) {
      j = parse_int(line.tokens[0], source, line.number, "commodity");
      at = 1;
    } else if (!(line.tokens.size() == 2 && k == 1)) {
      throw ParseError(source, line.number, k == 1 ? "line must be 'v value' or '1 v value'"
                                                   : "line must be 'j v value'");
    }
    if (j < 1 || j > k) {
      throw ParseError(source, line.number, "commodity outside [1, " + std::to_string(k) + "]");
    }
    const std::int64_t v = parse_int(line.tokens[at], source, line.number, "vertex");
    if (v < 0 || v >= vertex_count) {
      throw ParseError(source, line.number, "vertex outside [0, " + std::to_string(vertex_count) + ")");
    }
    const double value = parse_real(line.tokens[at + 1], source, line.number);
    b[static_cast<std::size_t>(j - 1)].add(static_cast<VertexId>(v), value);
  }
  return b;
}

KSource read_demand_file(const std::string& path, std::int64_t vertex_count) {
  std::ifstream in = open(path);
  return read_demand(in, vertex_count, path);
}

void write_demand(std::ostream& out, const KSource& b) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << b.k() << '\n';
  for (std::size_t j = 0; j < b.k(); ++j) {
    for (const auto& [v, value] : b[j]) {
      out << (j + 1) << ' ' << v << ' ' << value << '\n';
    }
  }
  out.precision(old_precision);
}

namespace {

nlohmann::json flow_map(const Flow& f) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [e, value] : f) obj[std::to_string(e)] = value;
  return obj;
}

nlohmann::json residual_summary(const Graph& g, const std::vector<SourceFunction>& residuals, double eps) {
  double max_abs = 0.0;
  double max_ratio = 0.0;
  std::size_t support = 0;
  for (const auto& r : residuals) {
    support += r.size();
    for (const auto& [v, value] : r) {
      max_abs = std::max(max_abs, std::abs(value));
      max_ratio = std::max(max_ratio, std::abs(value) / g.degree(v));
    }
  }
  return {{"max_abs", max_abs}, {"max_over_degree", max_ratio}, {"support", support}, {"eps", eps}};
}

nlohmann::json potential_certificate_json(const PotentialCertificate& cert) {
  nlohmann::json phi = nlohmann::json::array();
  for (const auto& [key, value] : cert.phi) phi.push_back({key.first, key.second + 1, value});
  return {{"kind", "potential-certificate"},
          {"phi", phi},
          {"lhs", cert.lhs},
          {"rhs", cert.rhs},
          {"iteration", cert.iteration}};
}

}  // namespace

nlohmann::json flow_artifact(const Graph& g, const KSource& b, const KFlow& f, double eps) {
  nlohmann::json flows = nlohmann::json::array();
  std::vector<SourceFunction> residuals;
  for (std::size_t j = 0; j < f.k(); ++j) {
    flows.push_back(flow_map(f[j]));
    residuals.push_back(residual(g, b[j], f[j]));
  }
  return {{"kind", "flow"},
          {"k", f.k()},
          {"eps", eps},
          {"congestion", congestion(f)},
          {"flows", flows},
          {"residual", residual_summary(g, residuals, eps)}};
}

nlohmann::json to_artifact(const Graph& g, const SingleResult& result, double eps) {
  if (result.is_certificate()) {
    const CutCertificate& c = result.certificate();
    return {{"kind", "cut-certificate"},
            {"set", c.set},
            {"b_of_s", c.b_of_s},
            {"boundary", c.boundary},
            {"volume", c.volume},
            {"iteration", c.iteration}};
  }
  const SingleFlowOutcome& out = result.flow();
  return {{"kind", "flow"},
          {"k", 1},
          {"eps", eps},
          {"iterations", out.iterations},
          {"congestion", congestion(out.flow)},
          {"flows", nlohmann::json::array({flow_map(out.flow)})},
          {"residual", residual_summary(g, {out.residual}, eps)}};
}

nlohmann::json to_artifact(const Graph& g, const MultiResult& result, double eps) {
  if (result.is_certificate()) return potential_certificate_json(result.certificate());
  const MultiFlowOutcome& out = result.flow();
  nlohmann::json flows = nlohmann::json::array();
  for (const Flow& fj : out.flow.commodities) flows.push_back(flow_map(fj));
  return {{"kind", "flow"},
          {"k", out.flow.k()},
          {"eps", eps},
          {"iterations", out.iterations},
          {"congestion", congestion(out.flow)},
          {"flows", flows},
          {"residual", residual_summary(g, out.residuals, eps)}};
}

namespace {

KFlow parse_flows(const nlohmann::json& artifact) {
  const auto& flows = artifact.at("flows");
  if (!flows.is_array()) throw ParseError("<artifact>", 0, "'flows' must be an array");
  KFlow f(flows.size());
  for (std::size_t j = 0; j < flows.size(); ++j) {
    for (const auto& [key, value] : flows[j].items()) {
      std::int64_t e = 0;
      auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), e);
      if (ec != std::errc() || ptr != key.data() + key.size()) {
        throw ParseError("<artifact>", 0, "flow key '" + key + "' is not an edge id");
      }
      f[j].add(static_cast<EdgeId>(e), value.get<double>());
    }
  }
  return f;
}

}  // namespace

VerifyReport verify_artifact(const Graph& g, const KSource& b, const nlohmann::json& artifact, double eps) {
  const std::string kind = artifact.at("kind").get<std::string>();
  if (kind == "flow") return verify_flow_output(g, b, parse_flows(artifact), eps);
  if (kind == "cut-certificate") {
    if (b.k() != 1) {
      VerifyReport report;
      report.fail({"commodity-count", "cut certificates need k = 1", static_cast<double>(b.k()), 1.0});
      return report;
    }
    const auto set = artifact.at("set").get<std::vector<VertexId>>();
    return verify_cut_certificate(g, b[0], set);
  }
  if (kind == "potential-certificate") {
    PotentialMatrix phi;
    for (const auto& entry : artifact.at("phi")) {
      if (!entry.is_array() || entry.size() != 3) {
        throw ParseError("<artifact>", 0, "phi entries must be [v, j, value]");
      }
      const auto v = entry[0].get<VertexId>();
      const auto j = entry[1].get<std::int32_t>() - 1;
      phi[{v, j}] = entry[2].get<double>();
    }
    return verify_potential_certificate(g, b, phi);
  }
  throw ParseError("<artifact>", 0, "unknown artifact kind '" + kind + "'");
}

}  // namespace localflow
