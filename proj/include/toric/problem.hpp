#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toric/diagnostics.hpp"
#include "toric/solver.hpp"
#include "toric/stability.hpp"

namespace toric {

inline constexpr int kSchemaVersion = 1;

struct EdgeProbeSpec {
  int edge = 0;
  Point2 p;
};

struct VertexProbeSpec {
  int vertex = 0;
  std::vector<double> t;
  std::vector<double> eps{0.1};
  double radius = 0.25;
};

struct ProbeLists {
  std::vector<EdgeProbeSpec> edge;
  std::optional<VertexProbeSpec> vertex;
  std::vector<std::vector<Point2>> envelope;  // convex regions X
  std::vector<std::vector<Point2>> paths;
  std::optional<double> m_stride;
};

/// Parsed problem document. Unknown fields are rejected at every level.
struct ProblemFile {
  int schema_version = kSchemaVersion;
  std::vector<Point2> vertices;
  std::vector<double> edge_weights;
  std::optional<double> A;  // nullopt for "auto"
  std::optional<SolverConfig> solver;
  std::optional<ScanConfig> scan;
  ProbeLists probes;

  Polytope polytope() const { return build_polytope(vertices, edge_weights, A); }
};

/// Throws ParseError with line and field context, or ValidationError when the
/// data does not describe a valid polytope.
ProblemFile parse_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text, const std::string& source = "<input>");

}  // namespace toric
