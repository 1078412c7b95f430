// toric: stability scans, Abreu solves, diagnostics and oracle checks.
//
// Exit codes: 0 success, 1 error, 2 destabilized verdict, 3 solver did not converge.
// The report on stdout is deterministic; stage timings go to stderr.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "toric/analytic.hpp"
#include "toric/problem.hpp"

namespace fs = std::filesystem;
using namespace toric;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDestabilized = 2;
constexpr int kExitNotConverged = 3;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string num(double v) {
  std::ostringstream ss;
  ss << std::setprecision(12) << v;
  return ss.str();
}

std::string pt(const Point2& p) { return "(" + num(p.x1) + ", " + num(p.x2) + ")"; }

class Report {
 public:
  void section(const std::string& name) { out_ << "[" << name << "]\n"; }
  void kv(const std::string& k, const std::string& v) { out_ << k << ": " << v << "\n"; }
  void kv(const std::string& k, double v) { kv(k, num(v)); }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

class Stopwatch {
 public:
  explicit Stopwatch(std::string stage) : stage_(std::move(stage)), t0_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::cerr << "time." << stage_ << ": " << std::fixed << std::setprecision(3) << s << " s\n";
  }

 private:
  std::string stage_;
  std::chrono::steady_clock::time_point t0_;
};

struct Flags {
  std::string problem;
  std::optional<int> grid, max_iters, scan_angles, scan_offsets;
  std::optional<double> gtol;
  std::string out;
  int threads = 1;
  double a1 = 1.0, a2 = 1.0, h = 1e-3, eps = 0.1;
  int order = 4;
};

std::optional<fs::path> out_dir(const Flags& f) {
  if (f.out.empty()) return std::nullopt;
  fs::create_directories(f.out);
  return fs::path(f.out);
}

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
  std::ofstream o(dir / name);
  if (!o) throw Error(ErrorKind::InvalidArgument, "cannot write " + (dir / name).string());
  o << std::setprecision(17);
  return o;
}

void header(Report& r, const std::string& command, const std::string& digest_source) {
  r.kv("command", command);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(digest_source)));
  r.kv("input_digest", std::string("fnv1a64:") + buf);
}

SolverConfig solver_config(const ProblemFile& pf, const Flags& f) {
  SolverConfig c = pf.solver.value_or(SolverConfig{});
  if (f.grid) c.N = *f.grid;
  if (f.gtol) c.g_tol = *f.gtol;
  if (f.max_iters) c.max_iters = *f.max_iters;
  c.threads = f.threads;
  return c;
}

int cmd_stability(const Flags& f, Report& r) {
  const std::string text = read_file(f.problem);
  header(r, "stability " + f.problem, text);
  const ProblemFile pf = parse_problem_text(text, f.problem);
  const Polytope P = pf.polytope();
  ScanConfig c = pf.scan.value_or(ScanConfig{});
  if (f.scan_angles) c.angles = *f.scan_angles;
  if (f.scan_offsets) c.offsets = *f.scan_offsets;
  c.threads = f.threads;
  const auto dir = out_dir(f);
  c.keep_grid = dir.has_value();
  StabilityReport s;
  {
    Stopwatch w("stability");
    s = scan_positivity(P, c);
  }
  r.section("stability");
  r.kv("A", s.A_used);
  r.kv("futaki_residual", num(s.futaki_residual[0]) + ", " + num(s.futaki_residual[1]) + ", " +
                              num(s.futaki_residual[2]));
  r.kv("status", to_string(s.status));
  if (s.status != StabilityStatus::inconclusive) {
    r.kv("min_L", s.min_L);
    r.kv("argmin_theta", s.argmin_lambda.theta);
    r.kv("argmin_offset", s.argmin_lambda.offset);
    r.kv("argmin_lambda", num(s.argmin_lambda.lambda.a1) + " x1 + " + num(s.argmin_lambda.lambda.a2) +
                              " x2 + " + num(s.argmin_lambda.lambda.b));
    if (s.status == StabilityStatus::stable) r.kv("C_estimate", s.C_estimate);
  }
  if (!s.note.empty()) r.kv("note", s.note);
  if (dir) {
    auto o = open_csv(*dir, "scan_grid.csv");
    o << "theta,offset,L\n";
    for (const auto& g : s.grid) o << g.theta << ',' << g.offset << ',' << g.L << '\n';
  }
  return s.status == StabilityStatus::destabilized ? kExitDestabilized : kExitOk;
}

void write_solve_artifacts(const fs::path& dir, const SolverResult& res) {
  {
    auto o = open_csv(dir, "potential.csv");
    write_potential_csv(o, *res.potential);
  }
  auto o = open_csv(dir, "m_history.csv");
  o << "step,M\n";
  for (std::size_t k = 0; k < res.M_history.size(); ++k) o << k << ',' << res.M_history[k] << '\n';
}

void report_solve(Report& r, const SolverResult& res) {
  r.section("solve");
  r.kv("status", to_string(res.status));
  r.kv("iterations", std::to_string(res.iterations));
  r.kv("gradient_norm", res.gradient_norm);
  r.kv("M_final", res.M_history.back());
  r.kv("max_residual", res.max_residual);
  if (!res.note.empty()) r.kv("note", res.note);
  const ResidualReport rep = residual_report(res);
  r.kv("L_u", rep.L_value);
  if (rep.identity_slack) r.kv("identity_slack", *rep.identity_slack);
  else r.kv("identity_slack", "not applicable (" + rep.note + ")");
  r.kv("max_V", rep.max_V);
}

int cmd_solve(const Flags& f, Report& r) {
  const std::string text = read_file(f.problem);
  header(r, "solve " + f.problem, text);
  const ProblemFile pf = parse_problem_text(text, f.problem);
  SolverResult res;
  {
    Stopwatch w("solve");
    res = minimize_M(pf.polytope(), solver_config(pf, f));
  }
  report_solve(r, res);
  if (const auto dir = out_dir(f)) write_solve_artifacts(*dir, res);
  return res.status == SolverStatus::converged ? kExitOk : kExitNotConverged;
}

int cmd_diagnose(const Flags& f, Report& r) {
  const std::string text = read_file(f.problem);
  header(r, "diagnose " + f.problem, text);
  const ProblemFile pf = parse_problem_text(text, f.problem);
  const Polytope P = pf.polytope();
  SolverResult res;
  {
    Stopwatch w("solve");
    res = minimize_M(P, solver_config(pf, f));
  }
  report_solve(r, res);
  const auto dir = out_dir(f);
  if (dir) write_solve_artifacts(*dir, res);
  auto field = std::make_shared<const PotentialField>(*res.potential);
  Stopwatch w("diagnostics");

  r.section("edge_probes");
  std::optional<std::ofstream> csv;
  if (dir) {
    csv = open_csv(*dir, "edge_probes.csv");
    *csv << "edge,p1,p2,s,D\n";
  }
  const auto& edges = P.polygon().edges();
  for (const auto& e : pf.probes.edge) {
    if (e.edge < 0 || static_cast<std::size_t>(e.edge) >= edges.size())
      throw Error(ErrorKind::ProbeOutside, "edge index " + std::to_string(e.edge) + " out of range");
    const auto& ed = edges[static_cast<std::size_t>(e.edge)];
    const EdgeProbe probe = make_edge_probe(ed.a, ed.b, e.p);
    const double D = D_of_p(*field, probe);
    r.kv("D" + pt(e.p), D);
    if (csv) *csv << e.edge << ',' << e.p.x1 << ',' << e.p.x2 << ',' << probe.s << ',' << D << '\n';
  }

  r.section("m_condition");
  const MScanResult m =
      m_condition_scan(*field, P.polygon(), {pf.probes.m_stride.value_or(2.0 * field->grid().h()), 1.0});
  r.kv("max_V", m.max_V);
  r.kv("argmax", pt(m.p) + " -> " + pt(m.q));
  r.kv("pairs", std::to_string(m.pairs));

  if (pf.probes.vertex) {
    const auto& v = *pf.probes.vertex;
    const Charted chart = Charted::at_vertex(field, P, static_cast<std::size_t>(v.vertex));
    VertexProfileConfig vc;
    vc.t = v.t;
    vc.eps = v.eps;
    const VertexProfile prof = vertex_profile(chart, vc);
    r.section("vertex_profile");
    for (const auto& row : prof.rows) {
      r.kv("E(" + num(row.t) + ")", row.E);
      r.kv("Delta(" + num(row.t) + ")", row.Delta);
    }
    r.kv("E_max", prof.E_max);
    const VolumeRatio vr = volume_bound_B(chart, v.radius, 10);
    r.kv("volume_ratio_sup", vr.sup);
    r.kv("volume_ratio_inf", vr.inf);
    if (dir) {
      auto o = open_csv(*dir, "vertex_profile.csv");
      o << "t,E,Delta";
      for (double e : vc.eps) o << ",F_" << e;
      o << '\n';
      for (const auto& row : prof.rows) {
        o << row.t << ',' << row.E << ',' << row.Delta;
        for (double F : row.F) o << ',' << F;
        o << '\n';
      }
      auto d = open_csv(*dir, "delta_n.csv");
      d << "n,delta_n\n";
      for (std::size_t k = 0; k < prof.delta_n.size(); ++k) d << k + 1 << ',' << prof.delta_n[k] << '\n';
    }
  }

  if (!pf.probes.envelope.empty()) {
    r.section("envelope");
    for (std::size_t k = 0; k < pf.probes.envelope.size(); ++k) {
      const EnvelopeCheck c = convex_envelope_check8(*field, pf.probes.envelope[k]);
      const std::string key = "X" + std::to_string(k);
      r.kv(key + ".lhs", c.boundary_lhs);
      r.kv(key + ".rhs", c.rhs);
      r.kv(key + ".slack", c.slack);
    }
  }
  if (!pf.probes.paths.empty()) {
    r.section("paths");
    for (std::size_t k = 0; k < pf.probes.paths.size(); ++k)
      r.kv("length" + std::to_string(k), riemannian_length(*field, pf.probes.paths[k]));
  }
  return res.status == SolverStatus::converged ? kExitOk : kExitNotConverged;
}

int cmd_joyce(const Flags& f, Report& r) {
  const JoyceParams p{f.a1, f.a2};
  const std::string args = "a1=" + num(f.a1) + " a2=" + num(f.a2) + " h=" + num(f.h) +
                           " order=" + std::to_string(f.order);
  header(r, "joyce-verify " + args, args);
  if (!(p.a1 > 0.0) || !(p.a2 > 0.0))
    throw Error(ErrorKind::InvalidArgument, "a1 and a2 must be positive");
  Stopwatch w("joyce");
  const JoycePotential u(p);
  double max_abreu = 0.0, max_nut = 0.0;
  const int n = 50;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Point2 x{0.5 + 4.5 * i / (n - 1), 0.5 + 4.5 * j / (n - 1)};
      max_abreu = std::max(max_abreu, std::abs(abreu_at(u, x, f.h, f.order)));
      if (p.a1 == p.a2) {
        const JoyceValue v = joyce_potential(p, x);
        max_nut = std::max(max_nut, std::abs(v.xi.x1 + v.xi.x2 - std::log(joyce_r(p, x)) - 2.0));
      }
    }
  double round_trip = 0.0, closed = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Point2 y{10.0 * i / (n - 1), 10.0 * j / (n - 1)};
      const Point2 x = joyce_map(p, y);
      const Point2 yi = joyce_inverse(p, x);
      round_trip = std::max(round_trip, norm(yi - y));
      closed = std::max(closed, norm(joyce_inverse_closed(p, x) - yi));
    }
  r.section("joyce");
  r.kv("patch", "[0.5, 5]^2, 50 x 50");
  r.kv("max_abreu", max_abreu);
  r.kv("round_trip_error", round_trip);
  r.kv("closed_form_vs_newton", closed);
  if (p.a1 == p.a2) r.kv("taub_nut_identity_error", max_nut);
  return kExitOk;
}

int cmd_oracle_1d(const Flags& f, Report& r) {
  const std::string args = "eps=" + num(f.eps);
  header(r, "oracle-1d " + args, args);
  const OneDFamily fam(f.eps);
  Stopwatch w("oracle-1d");
  using N = OneDFamily::Normalization;
  const double n_eps = fam.n_eps();
  double mean = 0.0, sq = 0.0;
  const int m = 100;
  std::vector<double> diffs;
  for (int k = 0; k < m; ++k) {
    const double x = -0.95 + 1.9 * k / (m - 1);
    diffs.push_back(fam.dU(x, N::at_minus_half) - fam.dU(x, N::at_plus_half));
    mean += diffs.back() / m;
  }
  for (double d : diffs) sq += (d - mean) * (d - mean) / m;
  r.section("oracle_1d");
  r.kv("eps", f.eps);
  r.kv("n_eps", n_eps);
  r.kv("n_eps_closed_form", fam.n_eps_closed_form());
  r.kv("constancy_stddev", std::sqrt(sq));
  if (const auto dir = out_dir(f)) {
    auto o = open_csv(*dir, "one_d.csv");
    o << "x,f,dU,U\n";
    for (int k = 0; k <= 200; ++k) {
      const double x = -0.99 + 1.98 * k / 200;
      o << x << ',' << fam.f(x) << ',' << fam.dU(x, N::at_0) << ',' << fam.U(x, N::at_0) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric Kaehler toolkit: stability, Abreu solver, diagnostics"};
  app.require_subcommand(1);
  Flags f;
  const auto common = [&](CLI::App* s) {
    s->add_option("--out", f.out, "directory for CSV artifacts");
    s->add_option("--threads", f.threads, "worker thread cap")->check(CLI::PositiveNumber);
  };
  const auto solver_flags = [&](CLI::App* s) {
    s->add_option("problem", f.problem, "problem file")->required();
    s->add_option("--grid", f.grid, "nodes per unit length");
    s->add_option("--gtol", f.gtol, "gradient tolerance");
    s->add_option("--max-iters", f.max_iters, "iteration cap");
  };
  auto* stab = app.add_subcommand("stability", "scan hinge positivity");
  stab->add_option("problem", f.problem, "problem file")->required();
  stab->add_option("--scan-angles", f.scan_angles, "crease angles");
  stab->add_option("--scan-offsets", f.scan_offsets, "crease offsets");
  common(stab);
  auto* solve = app.add_subcommand("solve", "minimize the discrete functional");
  solver_flags(solve);
  common(solve);
  auto* diag = app.add_subcommand("diagnose", "solve, then evaluate diagnostic probes");
  solver_flags(diag);
  common(diag);
  auto* joyce = app.add_subcommand("joyce-verify", "check the Joyce family on a test patch");
  joyce->add_option("--a1", f.a1, "first parameter")->required();
  joyce->add_option("--a2", f.a2, "second parameter")->required();
  joyce->add_option("--step", f.h, "difference step");
  joyce->add_option("--order", f.order, "difference order (2 or 4)");
  common(joyce);
  auto* one_d = app.add_subcommand("oracle-1d", "one-dimensional degenerating family");
  one_d->add_option("--eps", f.eps, "family parameter")->required();
  common(one_d);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  Report r;
  int code = kExitError;
  try {
    if (stab->parsed()) code = cmd_stability(f, r);
    else if (solve->parsed()) code = cmd_solve(f, r);
    else if (diag->parsed()) code = cmd_diagnose(f, r);
    else if (joyce->parsed()) code = cmd_joyce(f, r);
    else if (one_d->parsed()) code = cmd_oracle_1d(f, r);
  } catch (const Error& e) {
    std::cout << r.str();
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cout << r.str();
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  std::cout << r.str();
  return code;
}
