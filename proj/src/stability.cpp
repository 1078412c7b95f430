#include "toric/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <thread>
#include <tuple>

namespace toric {

const char* to_string(StabilityStatus s) {
  switch (s) {
    case StabilityStatus::stable: return "stable";
    case StabilityStatus::destabilized: return "destabilized";
    case StabilityStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

double evaluate_L_poly(const Polytope& polytope, const Polynomial& f) {
  return integrate_boundary_poly(polytope, f) -
         polytope.A() * integrate_region_poly(polytope.polygon(), f);
}

FutakiData determine_A_and_futaki(const Polytope& polytope) {
  FutakiData out;
  out.A = polytope.boundary_mass() / polytope.polygon().area();
  const Polytope matched(polytope.polygon(), polytope.weights(), out.A);
  out.residual = {evaluate_L_poly(matched, Polynomial::constant(1.0)),
                  evaluate_L_poly(matched, Polynomial::monomial(1, 0)),
                  evaluate_L_poly(matched, Polynomial::monomial(0, 1))};
  return out;
}

double futaki_tolerance(const Polytope& polytope) {
  return 1e-9 * polytope.boundary_mass() * polytope.polygon().diameter();
}

bool futaki_ok(const Polytope& polytope) {
  const Polynomial basis[3] = {Polynomial::constant(1.0), Polynomial::monomial(1, 0),
                               Polynomial::monomial(0, 1)};
  const double tol = futaki_tolerance(polytope);
  for (const auto& b : basis)
    if (std::abs(evaluate_L_poly(polytope, b)) > tol) return false;
  return true;
}

double boundary_mass_hinge(const Polytope& polytope, const AffineFunction& lambda) {
  double total = 0.0;
  const auto& edges = polytope.polygon().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double la = lambda(edges[k].a), lb = lambda(edges[k].b);
    double integral = 0.0;  // int_0^1 lambda^+ dt along the edge
    if (la >= 0.0 && lb >= 0.0)
      integral = 0.5 * (la + lb);
    else if (la > 0.0)
      integral = 0.5 * la * la / (la - lb);
    else if (lb > 0.0)
      integral = 0.5 * lb * lb / (lb - la);
    total += polytope.weights()[k] * edges[k].measure_length * integral;
  }
  return total;
}

double evaluate_L_hinge(const Polytope& polytope, const AffineFunction& lambda) {
  const auto region = clip_halfplane(polytope.polygon(), lambda);
  // Shoelace area and first moments of P+ give int lambda exactly.
  double twice_area = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < region.size(); ++i) {
    const Point2& p = region[i];
    const Point2& q = region[(i + 1) % region.size()];
    const double c = cross(p, q);
    twice_area += c;
    mx += (p.x1 + q.x1) * c;
    my += (p.x2 + q.x2) * c;
  }
  const double area = 0.5 * twice_area;
  if (region.empty() || area <= 1e-15 * polytope.polygon().area())
    throw Error(ErrorKind::ZeroHinge, "lambda^+ vanishes identically on P");
  const double interior = (lambda.a1 * mx + lambda.a2 * my) / 6.0 + lambda.b * area;
  return boundary_mass_hinge(polytope, lambda) - polytope.A() * interior;
}

namespace {

struct CreaseRange {
  Vec2 n;
  double lo = 0.0;  // crease through the base point
  double hi = 0.0;  // support value of P in direction n
};

CreaseRange crease_range(const Polytope& polytope, const Point2& base, double theta) {
  CreaseRange r;
  r.n = {std::cos(theta), std::sin(theta)};
  r.lo = dot(r.n, base);
  r.hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : polytope.polygon().vertices()) r.hi = std::max(r.hi, dot(r.n, v));
  return r;
}

/// Normalized L at (theta, fraction s of the offset range); +inf when invalid.
double normalized_L(const Polytope& polytope, const Point2& base, double theta, double s,
                    double* offset_out = nullptr) {
  if (s < 0.0 || s >= 1.0) return std::numeric_limits<double>::infinity();
  const CreaseRange r = crease_range(polytope, base, theta);
  const double c = r.lo + s * (r.hi - r.lo);
  if (offset_out) *offset_out = c;
  const AffineFunction lambda{r.n.x1, r.n.x2, -c};
  const double mass = boundary_mass_hinge(polytope, lambda);
  if (!(mass > 0.0)) return std::numeric_limits<double>::infinity();
  try {
    return evaluate_L_hinge(polytope, lambda) / mass;
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// Values closer than this count as ties.
constexpr double kTie = 1e-12;

struct Candidate {
  double L;
  double theta;
  double s;
  bool operator<(const Candidate& o) const {
    return std::tie(L, theta, s) < std::tie(o.L, o.theta, o.s);
  }
};

/// Smaller L wins; near-equal L falls back to smallest theta, then smallest s.
bool preferred(const Candidate& a, const Candidate& b) {
  if (std::abs(a.L - b.L) > kTie * std::max(1.0, std::abs(b.L))) return a.L < b.L;
  return std::tie(a.theta, a.s) < std::tie(b.theta, b.s);
}

}  // namespace

HingeFunction normalized_hinge(const Polytope& polytope, double theta, double offset) {
  const Vec2 n{std::cos(theta), std::sin(theta)};
  const AffineFunction raw{n.x1, n.x2, -offset};
  const double mass = boundary_mass_hinge(polytope, raw);
  if (!(mass > 0.0)) throw Error(ErrorKind::ZeroHinge, "hinge has no boundary mass");
  return {raw * (1.0 / mass), HingeNormalization::boundary_mass_one, theta, offset};
}

StabilityReport scan_positivity(const Polytope& polytope, const ScanConfig& config) {
  if (config.angles < 1 || config.offsets < 1)
    throw Error(ErrorKind::InvalidArgument, "scan resolution must be positive");
  StabilityReport report;
  const FutakiData futaki = determine_A_and_futaki(polytope);
  report.A_used = polytope.A();
  for (int i = 0; i < 3; ++i)
    report.futaki_residual[i] = evaluate_L_poly(
        polytope, i == 0 ? Polynomial::constant(1.0)
                         : (i == 1 ? Polynomial::monomial(1, 0) : Polynomial::monomial(0, 1)));
  report.base_point = polytope.polygon().centroid();
  if (!futaki_ok(polytope)) {
    report.status = StabilityStatus::inconclusive;
    char buf[160];
    std::snprintf(buf, sizeof buf, "moment residual exceeds tolerance %.3g (mass-matched A would be %.12g)",
                  futaki_tolerance(polytope), futaki.A);
    report.note = std::string(buf) + "; L does not vanish on affine functions, hinge values are not meaningful";
    return report;
  }

  const Point2 base = report.base_point;
  const int na = config.angles, nc = config.offsets;
  std::vector<double> values(static_cast<std::size_t>(na) * nc);
  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / na;
      for (int j = 0; j < nc; ++j)
        values[static_cast<std::size_t>(i) * nc + j] =
            normalized_L(polytope, base, theta, static_cast<double>(j) / nc);
    }
  };
  const int threads = std::max(1, std::min(config.threads, na));
  if (threads == 1) {
    work(0, na);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(work, na * t / threads, na * (t + 1) / threads);
    for (auto& th : pool) th.join();
  }

  std::vector<Candidate> grid;
  grid.reserve(values.size());
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nc; ++j) {
      const double theta = 2.0 * std::numbers::pi * i / na;
      const double s = static_cast<double>(j) / nc;
      grid.push_back({values[static_cast<std::size_t>(i) * nc + j], theta, s});
    }
  if (config.keep_grid) {
    report.grid.reserve(grid.size());
    for (const auto& g : grid) {
      const CreaseRange r = crease_range(polytope, base, g.theta);
      report.grid.push_back({g.theta, r.lo + g.s * (r.hi - r.lo), g.L});
    }
  }

  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(config.refine_candidates),
                                              grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(k), grid.end());

  const double diam = polytope.polygon().diameter();
  Candidate best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (std::size_t c = 0; c < k; ++c) {
    Candidate cur = grid[c];
    double dtheta = 2.0 * std::numbers::pi / na;
    double ds = 1.0 / nc;
    for (int iter = 0; iter < 100000; ++iter) {
      const CreaseRange r = crease_range(polytope, base, cur.theta);
      if (ds * (r.hi - r.lo) < config.refine_tolerance * diam &&
          dtheta < config.refine_tolerance)
        break;
      bool moved = false;
      const Candidate trial[4] = {{0, cur.theta - dtheta, cur.s},
                                  {0, cur.theta + dtheta, cur.s},
                                  {0, cur.theta, cur.s - ds},
                                  {0, cur.theta, cur.s + ds}};
      for (Candidate t : trial) {
        t.L = normalized_L(polytope, base, t.theta, t.s);
        if (t.L < cur.L - kTie * std::max(1.0, std::abs(cur.L))) {
          cur = t;
          moved = true;
        }
      }
      if (!moved) {
        dtheta *= 0.5;
        ds *= 0.5;
      }
    }
    cur.theta = std::remainder(cur.theta, 2.0 * std::numbers::pi);
    if (cur.theta < 0.0) cur.theta += 2.0 * std::numbers::pi;
    if (preferred(cur, best)) best = cur;
  }

  double offset = 0.0;
  report.min_L = normalized_L(polytope, base, best.theta, best.s, &offset);
  report.argmin_lambda = normalized_hinge(polytope, best.theta, offset);
  report.status = report.min_L > 0.0 ? StabilityStatus::stable : StabilityStatus::destabilized;
  report.C_estimate = report.status == StabilityStatus::stable ? 1.0 / report.min_L : 0.0;
  report.note =
      "verdict assumes positivity on hinge functions lambda^+ is equivalent to positivity on all "
      "non-affine convex functions";
  return report;
}

double stability_constant_estimate(const Polytope& polytope, const StabilityReport& report) {
  (void)polytope;
  if (report.status != StabilityStatus::stable || !(report.min_L > 0.0))
    throw Error(ErrorKind::NotStable, "scan found min L = " + std::to_string(report.min_L));
  return 1.0 / report.min_L;
}

}  // namespace toric
