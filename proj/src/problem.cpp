#include "toric/problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace toric {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(where, "unknown field '" + k + "'");
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

Point2 point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [x1, x2]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

std::vector<Point2> points(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of points");
  std::vector<Point2> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(point(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

SolverConfig solver_section(const json& j) {
  only_keys(j, "solver", {"grid", "gtol", "max_iters", "method", "threads"});
  SolverConfig c;
  if (j.contains("grid")) c.N = integer(j["grid"], "solver.grid");
  if (j.contains("gtol")) c.g_tol = number(j["gtol"], "solver.gtol");
  if (j.contains("max_iters")) c.max_iters = integer(j["max_iters"], "solver.max_iters");
  if (j.contains("threads")) c.threads = integer(j["threads"], "solver.threads");
  if (j.contains("method")) {
    if (!j["method"].is_string()) fail("solver.method", "expected a string");
    const auto m = j["method"].get<std::string>();
    if (m == "newton") c.method = SolverMethod::newton;
    else if (m == "gradient_descent") c.method = SolverMethod::gradient_descent;
    else fail("solver.method", "expected 'newton' or 'gradient_descent'");
  }
  return c;
}

ScanConfig scan_section(const json& j) {
  only_keys(j, "scan", {"angles", "offsets", "refine_candidates", "refine_tolerance"});
  ScanConfig c;
  if (j.contains("angles")) c.angles = integer(j["angles"], "scan.angles");
  if (j.contains("offsets")) c.offsets = integer(j["offsets"], "scan.offsets");
  if (j.contains("refine_candidates"))
    c.refine_candidates = integer(j["refine_candidates"], "scan.refine_candidates");
  if (j.contains("refine_tolerance"))
    c.refine_tolerance = number(j["refine_tolerance"], "scan.refine_tolerance");
  return c;
}

ProbeLists probe_section(const json& j) {
  only_keys(j, "probes", {"edge", "vertex", "envelope", "paths", "m_stride"});
  ProbeLists p;
  if (j.contains("edge")) {
    if (!j["edge"].is_array()) fail("probes.edge", "expected an array");
    for (std::size_t k = 0; k < j["edge"].size(); ++k) {
      const std::string w = "probes.edge[" + std::to_string(k) + "]";
      const json& e = j["edge"][k];
      only_keys(e, w, {"edge", "p"});
      if (!e.contains("edge") || !e.contains("p")) fail(w, "needs 'edge' and 'p'");
      p.edge.push_back({integer(e["edge"], w + ".edge"), point(e["p"], w + ".p")});
    }
  }
  if (j.contains("vertex")) {
    const json& v = j["vertex"];
    only_keys(v, "probes.vertex", {"vertex", "t", "eps", "radius"});
    VertexProbeSpec s;
    if (v.contains("vertex")) s.vertex = integer(v["vertex"], "probes.vertex.vertex");
    if (v.contains("t")) s.t = numbers(v["t"], "probes.vertex.t");
    if (v.contains("eps")) s.eps = numbers(v["eps"], "probes.vertex.eps");
    if (v.contains("radius")) s.radius = number(v["radius"], "probes.vertex.radius");
    p.vertex = s;
  }
  if (j.contains("envelope")) {
    if (!j["envelope"].is_array()) fail("probes.envelope", "expected an array of regions");
    for (std::size_t k = 0; k < j["envelope"].size(); ++k)
      p.envelope.push_back(points(j["envelope"][k], "probes.envelope[" + std::to_string(k) + "]"));
  }
  if (j.contains("paths")) {
    if (!j["paths"].is_array()) fail("probes.paths", "expected an array of polylines");
    for (std::size_t k = 0; k < j["paths"].size(); ++k)
      p.paths.push_back(points(j["paths"][k], "probes.paths[" + std::to_string(k) + "]"));
  }
  if (j.contains("m_stride")) p.m_stride = number(j["m_stride"], "probes.m_stride");
  return p;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ":" +
                                           std::to_string(col) + ": malformed document");
  }
  only_keys(doc, source, {"schema_version", "vertices", "edge_weights", "A", "solver", "scan", "probes"});

  ProblemFile pf;
  if (!doc.contains("schema_version")) fail(source, "missing 'schema_version'");
  pf.schema_version = integer(doc["schema_version"], "schema_version");
  if (pf.schema_version != kSchemaVersion)
    fail("schema_version", "unsupported version " + std::to_string(pf.schema_version));
  if (!doc.contains("vertices")) fail(source, "missing 'vertices'");
  if (!doc.contains("edge_weights")) fail(source, "missing 'edge_weights'");
  pf.vertices = points(doc["vertices"], "vertices");
  pf.edge_weights = numbers(doc["edge_weights"], "edge_weights");
  if (doc.contains("A")) {
    const json& a = doc["A"];
    if (a.is_string()) {
      if (a.get<std::string>() != "auto") fail("A", "expected a number or \"auto\"");
    } else {
      pf.A = number(a, "A");
    }
  }
  if (doc.contains("solver")) pf.solver = solver_section(doc["solver"]);
  if (doc.contains("scan")) pf.scan = scan_section(doc["scan"]);
  if (doc.contains("probes")) pf.probes = probe_section(doc["probes"]);

  if (pf.edge_weights.size() != pf.vertices.size())
    throw Error(ErrorKind::ValidationError,
                std::to_string(pf.edge_weights.size()) + " edge weights for " +
                    std::to_string(pf.vertices.size()) + " edges");
  try {
    (void)pf.polytope();
  } catch (const Error& e) {
    throw Error(ErrorKind::ValidationError, e.what());
  }
  return pf;
}

ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str(), path);
}

}  // namespace toric
