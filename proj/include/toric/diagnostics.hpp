#pragma once

#include <optional>
#include <vector>

#include "toric/field.hpp"

namespace toric {

// Probes on an arbitrary Potential. Vertex probes expect the potential in a
// vertex chart: vertex at the origin, the two edges along the positive axes.

/// Ray from an interior point p to an edge along the outward normal.
struct EdgeProbe {
  Point2 p;
  Vec2 nu;         // unit outward normal of the edge
  double s = 0.0;  // distance from p to the edge line
  Point2 q;        // p + s nu, in the open edge
};

/// Probe from p to the open segment [a, b]; the interior side is the left of
/// a -> b. Throws ProbeOutside when p is not strictly inside or q misses the
/// open segment.
EdgeProbe make_edge_probe(const Point2& a, const Point2& b, const Point2& p);

/// (u(q) - u(p) - grad u(p).(q - p)) / s.
double D_of_p(const Potential& u, const EdgeProbe& probe);

/// grad u(q).nu - grad u(p).nu with nu = (q - p) / |q - p|.
double pair_variation(const Potential& u, const Point2& p, const Point2& q);

struct MScanConfig {
  double stride = 0.0;       // lattice spacing of probe points
  double margin_factor = 1.0;  // d = margin_factor * |q - p|
};

struct MScanResult {
  double max_V = 0.0;
  Point2 p, q;
  long long pairs = 0;
};

/// Max of pair_variation over lattice pairs (p, q) with p - d nu and q + d nu
/// in the closed polygon.
MScanResult m_condition_scan(const Potential& u, const Polygon& polygon, const MScanConfig& config);

struct VertexProfileConfig {
  std::vector<double> t;
  std::vector<double> eps{0.1};
  int chord_points = 41;
  int delta_n_max = 8;  // delta_n for n = 1 .. delta_n_max
};

struct VertexProfileRow {
  double t = 0.0;
  double E = 0.0;
  double Delta = 0.0;
  std::vector<double> F;  // F_eps for each configured eps
};

struct VertexProfile {
  std::vector<VertexProfileRow> rows;
  std::vector<double> delta_n;  // delta_n[k] is delta_{k+1}
  double E_max = 0.0;
};

/// E(t) = (u(2t,0) + u(0,2t) - 2u(t,t)) / t;
/// Delta(t) = t^2 max J on x1 + x2 = 2t, |x1 - x2| <= t/10;
/// delta_n = U'(2^{1-n}) - U'(2^{-n}) with U(t) = u(t, t).
VertexProfile vertex_profile(const Potential& chart, const VertexProfileConfig& config);

double E_of_t(const Potential& chart, double t);

struct VolumeRatio {
  double sup = 0.0;
  double inf = 0.0;
};

/// Extrema of J exp(xi1 + xi2 - 2) on an m x m lattice in (0, radius]^2. J
/// scales like exp(-(xi1 + xi2)) near a vertex; the offset 2 makes the flat
/// model x1 log x1 + x2 log x2 give ratio 1.
VolumeRatio volume_bound_B(const Potential& chart, double radius, int m = 20);

struct EnvelopeCheck {
  /// int_dP (u - env) dsigma, the left side before the limit in the derivation.
  double boundary_lhs = 0.0;
  /// int_P (u - env) dmu, the interior form of the left side.
  double interior_lhs = 0.0;
  double volume_term = 0.0;  // n Vol(P \ X), n = 2
  double A_term = 0.0;       // int_P A (u - env) dmu
  double rhs = 0.0;
  double slack = 0.0;          // rhs - boundary_lhs
  double interior_slack = 0.0;  // rhs - interior_lhs
  double max_envelope_excess = 0.0;  // max over nodes of env - u
};

/// Envelope env = max of supporting planes of u at the inside grid nodes lying
/// in the convex region X, compared against u at all closed nodes.
/// Throws EmptyX when no inside node lies in X.
EnvelopeCheck convex_envelope_check8(const PotentialField& field, const std::vector<Point2>& X);

struct SublevelConfig {
  double l1 = 1.0;  // half-lengths of the two edges at the vertex
  double l2 = 1.0;
  std::vector<double> h;
  int angle_points = 64;  // Gauss-Legendre nodes over the quarter turn, in panels of 16
};

struct SublevelSlice {
  double h = 0.0;
  double xi1 = 0.0, xi2 = 0.0;  // tangency abscissae on the axes
  double D1 = 0.0, D2 = 0.0;    // zeros of the tangent lines
  double G1 = 0.0, G2 = 0.0;    // boundary deficit integrals
  double area_omega = 0.0;      // Area(Omega(h)) over the quadrant
  double J = 0.0;               // int_Omega (u - env_X(h))
};

/// Sublevel machinery of phi = u - x.grad u near the vertex, for levels
/// h < u(0, 0). Omega(h) is swept in polar coordinates over the quadrant.
std::vector<SublevelSlice> sublevel_profile(const Potential& chart, const SublevelConfig& config);

/// Length of a polyline in the metric u_ij. Interior segments use composite
/// Simpson with 2^8 intervals; segments with an endpoint on the boundary use
/// Gauss-Legendre in tau with t = tau^2 from that endpoint.
/// Throws PathOutside.
double riemannian_length(const Potential& u, const std::vector<Point2>& path, int samples = 256);

}  // namespace toric
