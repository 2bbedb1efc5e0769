#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "localflow/flow_model.hpp"
#include "localflow/graph.hpp"
#include "localflow/multi_flow.hpp"
#include "localflow/single_flow.hpp"
#include "localflow/verify.hpp"

namespace localflow {

/// Malformed input; line is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::int64_t line, const std::string& message)
      : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                           message),
        line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

// Graph text: "n m" then m lines "u v", 0-based. Blank lines and '#'
// comments are skipped.
Graph read_graph(std::istream& in, const std::string& source = "<graph>");
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);

// Demand text: "k" then lines "j v value" with j in 1..k. For k = 1 the
// commodity column may be omitted ("v value").
KSource read_demand(std::istream& in, std::int64_t vertex_count, const std::string& source = "<demand>");
KSource read_demand_file(const std::string& path, std::int64_t vertex_count);
void write_demand(std::ostream& out, const KSource& b);

// Artifacts are JSON objects discriminated by "kind":
//   flow                   {"flows": [{"edge": value, ...} per commodity], "residual": {...}}
//   cut-certificate        {"set": [...], "b_of_s", "boundary", "volume"}
//   potential-certificate  {"phi": [[v, j, value], ...] with j 1-based, "lhs", "rhs"}
nlohmann::json to_artifact(const Graph& g, const SingleResult& result, double eps);
nlohmann::json to_artifact(const Graph& g, const MultiResult& result, double eps);
nlohmann::json flow_artifact(const Graph& g, const KSource& b, const KFlow& f, double eps);

/// Recomputes everything an artifact claims against (g, b).
VerifyReport verify_artifact(const Graph& g, const KSource& b, const nlohmann::json& artifact, double eps);

}  // namespace localflow
