#include "toric/diagnostics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace toric {

namespace {

using boost::math::quadrature::gauss_kronrod;

double kronrod(const std::function<double(double)>& f, double a, double b) {
  return gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-12);
}

/// Composite Gauss-Legendre on [a, b] with `panels` panels of 16 points.
template <class F>
double composite_gauss(F&& f, double a, double b, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  double s = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    s += Rule::integrate(f, a + p * w, a + (p + 1) * w);
  return s;
}

/// Root of a decreasing function g on [lo, hi] with g(lo) >= 0 >= g(hi).
template <class F>
double decreasing_root(F&& g, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

/// lambda >= 0 exactly on the left of a -> b.
AffineFunction left_of(const Point2& a, const Point2& b) {
  const Vec2 d = b - a;
  return {-d.x2, d.x1, d.x2 * a.x1 - d.x1 * a.x2};
}

void require_inside(const Potential& u, const Point2& x, const char* what) {
  if (!u.in_closure(x)) throw Error(ErrorKind::ProbeOutside, what);
}

}  // namespace

EdgeProbe make_edge_probe(const Point2& a, const Point2& b, const Point2& p) {
  const Vec2 d = b - a;
  const double len = norm(d);
  if (len == 0.0) throw Error(ErrorKind::InvalidArgument, "degenerate edge");
  const Vec2 dir = d / len;
  const Vec2 inward{-dir.x2, dir.x1};
  EdgeProbe probe;
  probe.p = p;
  probe.s = dot(inward, p - a);
  if (!(probe.s > 0.0)) throw Error(ErrorKind::ProbeOutside, "probe point is not inside the edge half-plane");
  probe.nu = -inward;
  probe.q = p + probe.nu * probe.s;
  const double t = dot(probe.q - a, dir) / len;
  const double tol = 1e-9;
  if (!(t > tol && t < 1.0 - tol))
    throw Error(ErrorKind::ProbeOutside, "probe ray misses the open edge");
  return probe;
}

double D_of_p(const Potential& u, const EdgeProbe& probe) {
  if (!(u.domain_distance(probe.p) > 0.0))
    throw Error(ErrorKind::ProbeOutside, "probe point is not interior");
  require_inside(u, probe.q, "edge point is outside the domain");
  const Jet jp = u.jet(probe.p);
  return (u.value(probe.q) - jp.value - dot(jp.gradient, probe.q - probe.p)) / probe.s;
}

double pair_variation(const Potential& u, const Point2& p, const Point2& q) {
  const Vec2 d = q - p;
  const double len = norm(d);
  if (len == 0.0) throw Error(ErrorKind::InvalidArgument, "pair points coincide");
  const Vec2 nu = d / len;
  return dot(u.jet(q).gradient, nu) - dot(u.jet(p).gradient, nu);
}

MScanResult m_condition_scan(const Potential& u, const Polygon& polygon, const MScanConfig& config) {
  if (!(config.stride > 0.0)) throw Error(ErrorKind::InvalidArgument, "stride must be positive");
  Point2 lo = polygon.vertices().front(), hi = lo;
  for (const auto& v : polygon.vertices()) {
    lo = {std::min(lo.x1, v.x1), std::min(lo.x2, v.x2)};
    hi = {std::max(hi.x1, v.x1), std::max(hi.x2, v.x2)};
  }
  std::vector<Point2> pts;
  std::vector<Vec2> grads;
  for (double y = lo.x2 + config.stride; y < hi.x2; y += config.stride)
    for (double x = lo.x1 + config.stride; x < hi.x1; x += config.stride) {
      const Point2 p{x, y};
      if (polygon.signed_distance(p) <= 0.0) continue;
      pts.push_back(p);
      grads.push_back(u.jet(p).gradient);
    }
  MScanResult r;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const Vec2 d = pts[b] - pts[a];
      const double len = norm(d);
      const Vec2 nu = d / len;
      const double m = config.margin_factor * len;
      if (polygon.signed_distance(pts[a] - nu * m) < 0.0 ||
          polygon.signed_distance(pts[b] + nu * m) < 0.0)
        continue;
      ++r.pairs;
      const double v = dot(grads[b] - grads[a], nu);
      if (r.pairs == 1 || v > r.max_V) {
        r.max_V = v;
        r.p = pts[a];
        r.q = pts[b];
      }
    }
  return r;
}

double E_of_t(const Potential& chart, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be positive");
  const Point2 a{2.0 * t, 0.0}, b{0.0, 2.0 * t}, c{t, t};
  for (const auto& x : {a, b, c}) require_inside(chart, x, "vertex probe sample outside the domain");
  return (chart.value(a) + chart.value(b) - 2.0 * chart.value(c)) / t;
}

VertexProfile vertex_profile(const Potential& chart, const VertexProfileConfig& config) {
  if (config.chord_points < 1) throw Error(ErrorKind::InvalidArgument, "need chord points");
  VertexProfile out;
  for (double t : config.t) {
    VertexProfileRow row;
    row.t = t;
    row.E = E_of_t(chart, t);
    double maxJ = 0.0;
    for (int k = 0; k < config.chord_points; ++k) {
      const double s = config.chord_points == 1
                           ? 0.0
                           : -t / 20.0 + (t / 10.0) * k / (config.chord_points - 1);
      const Point2 x{t + s, t - s};
      require_inside(chart, x, "chord sample outside the domain");
      maxJ = std::max(maxJ, chart.jet(x).hessian.det());
    }
    row.Delta = t * t * maxJ;
    for (double e : config.eps) row.F.push_back(row.E + e * row.Delta);
    out.E_max = out.rows.empty() ? row.E : std::max(out.E_max, row.E);
    out.rows.push_back(std::move(row));
  }
  const auto diag_slope = [&](double t) {
    const Vec2 g = chart.jet({t, t}).gradient;
    return g.x1 + g.x2;
  };
  for (int n = 1; n <= config.delta_n_max; ++n) {
    const double t1 = std::ldexp(1.0, 1 - n), t0 = std::ldexp(1.0, -n);
    if (!(chart.domain_distance({t1, t1}) > 0.0) || !(chart.domain_distance({t0, t0}) > 0.0))
      continue;
    out.delta_n.push_back(diag_slope(t1) - diag_slope(t0));
  }
  return out;
}

VolumeRatio volume_bound_B(const Potential& chart, double radius, int m) {
  if (!(radius > 0.0) || m < 1) throw Error(ErrorKind::InvalidArgument, "invalid sample lattice");
  VolumeRatio r{0.0, std::numeric_limits<double>::infinity()};
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b) {
      const Point2 x{radius * a / m, radius * b / m};
      if (!(chart.domain_distance(x) > 0.0))
        throw Error(ErrorKind::ProbeOutside, "volume sample outside the domain");
      const Jet j = chart.jet(x);
      const double ratio = j.hessian.det() * std::exp(j.gradient.x1 + j.gradient.x2 - 2.0);
      r.sup = std::max(r.sup, ratio);
      r.inf = std::min(r.inf, ratio);
    }
  return r;
}

EnvelopeCheck convex_envelope_check8(const PotentialField& field, const std::vector<Point2>& X) {
  const Grid& g = field.grid();
  const Polytope& P = field.polytope();
  if (X.size() < 3) throw Error(ErrorKind::EmptyX, "X needs at least three vertices");
  std::vector<AffineFunction> sides;
  for (std::size_t k = 0; k < X.size(); ++k) sides.push_back(left_of(X[k], X[(k + 1) % X.size()]));
  const double tol = 1e-12 * P.polygon().diameter();
  const auto in_X = [&](const Point2& x) {
    for (const auto& s : sides)
      if (s(x) < -tol * norm(s.gradient())) return false;
    return true;
  };

  // Supporting planes: full planes at inside nodes; tangent lines along the
  // edge at boundary nodes, acting only on that edge line; the vertex value
  // at vertex nodes.
  struct Plane {
    Point2 p;
    double value;
    Vec2 slope;
    int edge;  // -1 for full planes
  };
  std::vector<Plane> planes;
  std::vector<char> vertex_in_X(g.nodes().size(), 0);
  const auto& edges = P.polygon().edges();
  const double delta = 1e-4 * g.h();
  for (int k : g.closed_nodes()) {
    const GridNode& n = g.node(k);
    if (!in_X(n.x)) continue;
    if (n.cls == NodeClass::inside) {
      const Jet j = field.jet(n.x);
      planes.push_back({n.x, j.value, j.gradient, -1});
    } else if (n.cls == NodeClass::boundary) {
      const Vec2 t = edges[static_cast<std::size_t>(n.edge)].direction() /
                     edges[static_cast<std::size_t>(n.edge)].length;
      const double d = (field.value(n.x + t * delta) - field.value(n.x - t * delta)) / (2.0 * delta);
      planes.push_back({n.x, field.value(n.x), t * d, n.edge});
    } else {
      vertex_in_X[static_cast<std::size_t>(k)] = 1;
    }
  }
  if (std::none_of(planes.begin(), planes.end(), [](const Plane& p) { return p.edge < 0; }))
    throw Error(ErrorKind::EmptyX, "no interior grid node lies in X");

  const auto& ell = P.defining_functions();
  const Eigen::VectorXd bw = boundary_weights(P, g);
  EnvelopeCheck c;
  for (std::size_t u = 0; u < g.closed_nodes().size(); ++u) {
    const int k = g.closed_nodes()[u];
    const GridNode& n = g.node(k);
    const double uy = field.value(n.x);
    double env = -std::numeric_limits<double>::infinity();
    if (vertex_in_X[static_cast<std::size_t>(k)]) env = uy;
    for (const auto& pl : planes) {
      if (pl.edge >= 0) {
        const auto& l = ell[static_cast<std::size_t>(pl.edge)];
        if (std::abs(l(n.x)) > tol * norm(l.gradient())) continue;
      }
      env = std::max(env, pl.value + dot(pl.slope, n.x - pl.p));
    }
    c.max_envelope_excess = std::max(c.max_envelope_excess, env - uy);
    const double diff = uy - env;
    c.boundary_lhs += bw[static_cast<Eigen::Index>(u)] * diff;
    c.interior_lhs += n.alpha * diff;
  }
  std::vector<Point2> PX = P.polygon().vertices();
  for (const auto& s : sides) {
    PX = clip_halfplane(PX, s);
    if (PX.empty()) break;
  }
  c.volume_term = 2.0 * (P.polygon().area() - polygon_area(PX));
  c.A_term = P.A() * c.interior_lhs;
  c.rhs = c.volume_term + c.A_term;
  c.slack = c.rhs - c.boundary_lhs;
  c.interior_slack = c.rhs - c.interior_lhs;
  return c;
}

std::vector<SublevelSlice> sublevel_profile(const Potential& chart, const SublevelConfig& config) {
  if (!(config.l1 > 0.0) || !(config.l2 > 0.0) || config.angle_points < 1)
    throw Error(ErrorKind::InvalidArgument, "invalid sublevel configuration");
  const double hbar = chart.value({0.0, 0.0});
  const double scale = std::max(config.l1, config.l2);

  struct Axis {
    double xi, slope, G;
  };
  const auto axis = [&](int i, double l, double h) -> Axis {
    const auto pt = [&](double t) { return i == 0 ? Point2{t, 0.0} : Point2{0.0, t}; };
    const auto U = [&](double t) { return chart.value(pt(t)); };
    const auto dU = [&](double t) {
      const Vec2 g = chart.jet(pt(t)).gradient;
      return i == 0 ? g.x1 : g.x2;
    };
    const auto phi = [&](double t) { return U(t) - t * dU(t) - h; };
    const double hi = 2.0 * l;
    require_inside(chart, pt(hi), "edge sample outside the domain");
    if (!(phi(hi) < 0.0)) throw Error(ErrorKind::ProbeOutside, "level is below the edge tangency range");
    const double xi = decreasing_root(phi, 1e-12 * l, hi);
    const double s = dU(xi);
    const double G = kronrod([&](double t) { return U(t) - (h + s * t); }, 0.0, xi);
    return {xi, s, G};
  };

  std::vector<SublevelSlice> out;
  for (double h : config.h) {
    if (!(h < hbar)) throw Error(ErrorKind::InvalidArgument, "level must lie below u(0, 0)");
    SublevelSlice s;
    s.h = h;
    const Axis a1 = axis(0, config.l1, h), a2 = axis(1, config.l2, h);
    s.xi1 = a1.xi;
    s.xi2 = a2.xi;
    s.G1 = a1.G;
    s.G2 = a2.G;
    s.D1 = -h / a1.slope;
    s.D2 = -h / a2.slope;

    const auto R_of = [&](double theta) {
      const Vec2 e{std::cos(theta), std::sin(theta)};
      const auto psi = [&](double r) {
        const Jet j = chart.jet(e * r);
        return j.value - r * dot(j.gradient, e) - h;
      };
      double r = 1e-3 * scale;
      while (psi(r) > 0.0) {
        r *= 2.0;
        if (!(chart.domain_distance(e * r) > 0.0) || r > 1e3 * scale)
          throw Error(ErrorKind::ProbeOutside, "sublevel boundary ray leaves the domain");
      }
      return decreasing_root(psi, r > 1e-3 * scale ? 0.5 * r : 1e-12 * scale, r);
    };
    const int panels = std::max(1, config.angle_points / 16);
    const double quarter = 0.5 * std::numbers::pi;
    s.area_omega = 0.5 * composite_gauss([&](double th) { const double R = R_of(th); return R * R; },
                                         0.0, quarter, panels);
    s.J = composite_gauss(
        [&](double th) {
          const double R = R_of(th);
          const Vec2 e{std::cos(th), std::sin(th)};
          const double uR = chart.value(e * R);
          return kronrod([&](double r) { return (chart.value(e * r) - h - (r / R) * (uR - h)) * r; },
                         0.0, R);
        },
        0.0, quarter, panels);
    out.push_back(s);
  }
  return out;
}

double riemannian_length(const Potential& u, const std::vector<Point2>& path, int samples) {
  if (path.size() < 2) return 0.0;
  if (samples < 2 || samples % 2 != 0) throw Error(ErrorKind::InvalidArgument, "samples must be even");
  double scale = 0.0;
  for (const auto& p : path) scale = std::max(scale, norm(p));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (const auto& p : path)
    if (u.domain_distance(p) < -tol) throw Error(ErrorKind::PathOutside, "path leaves the domain");
  const auto on_boundary = [&](const Point2& p) { return u.domain_distance(p) <= tol; };

  const auto speed = [&](const Point2& a, const Vec2& d, double t) {
    return std::sqrt(std::max(0.0, u.second_along(a + d * t, d)));
  };
  // From a boundary endpoint a: t = tau^2 removes the 1 / sqrt(t) growth.
  const auto from_boundary = [&](const Point2& a, const Point2& b) {
    const Vec2 d = b - a;
    return composite_gauss([&](double tau) { return 2.0 * tau * speed(a, d, tau * tau); }, 0.0, 1.0,
                           std::max(1, samples / 16));
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Point2 a = path[k], b = path[k + 1];
    if (a == b) continue;
    const bool ba = on_boundary(a), bb = on_boundary(b);
    if (ba && bb) {
      const Point2 m = (a + b) * 0.5;
      total += from_boundary(a, m) + from_boundary(b, m);
    } else if (ba) {
      total += from_boundary(a, b);
    } else if (bb) {
      total += from_boundary(b, a);
    } else {
      const Vec2 d = b - a;
      double s = speed(a, d, 0.0) + speed(a, d, 1.0);
      for (int i = 1; i < samples; ++i) s += (i % 2 ? 4.0 : 2.0) * speed(a, d, static_cast<double>(i) / samples);
      total += s / (3.0 * samples);
    }
  }
  return total;
}

}  // namespace toric
