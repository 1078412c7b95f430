#include "toric/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace toric {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvex: return "NonConvex";
    case ErrorKind::DegenerateEdge: return "DegenerateEdge";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::IrrationalNormal: return "IrrationalNormal";
    case ErrorKind::ZeroHinge: return "ZeroHinge";
    case ErrorKind::NotStable: return "NotStable";
    case ErrorKind::OutsidePolygon: return "OutsidePolygon";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InfeasibleStart: return "InfeasibleStart";
    case ErrorKind::FutakiGate: return "FutakiGate";
    case ErrorKind::NotDelzant: return "NotDelzant";
    case ErrorKind::GridMisaligned: return "GridMisaligned";
    case ErrorKind::ProbeOutside: return "ProbeOutside";
    case ErrorKind::EmptyX: return "EmptyX";
    case ErrorKind::PathOutside: return "PathOutside";
    case ErrorKind::OriginSingular: return "OriginSingular";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double polygon_area(std::span<const Point2> v) {
  if (v.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * twice;
}

std::optional<LatticeVector> rational_normal(const Vec2& n) {
  constexpr long long kMaxDenominator = 1000000;
  constexpr double kTol = 1e-9;
  const bool first_major = std::abs(n.x1) >= std::abs(n.x2);
  const double major = first_major ? n.x1 : n.x2;
  const double minor = first_major ? n.x2 : n.x1;
  if (major == 0.0) return std::nullopt;
  const double r = std::abs(minor / major);

  // Continued-fraction convergents h/k of r.
  long long h_prev = 1, h = static_cast<long long>(std::floor(r));
  long long k_prev = 0, k = 1;
  double frac = r - std::floor(r);
  while (true) {
    if (std::abs(r - static_cast<double>(h) / static_cast<double>(k)) <= kTol) break;
    if (frac < 1e-15) return std::nullopt;
    const double inv = 1.0 / frac;
    const long long a = static_cast<long long>(std::floor(inv));
    frac = inv - std::floor(inv);
    const long long h_next = a * h + h_prev;
    const long long k_next = a * k + k_prev;
    if (k_next > kMaxDenominator) return std::nullopt;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  const long long g = std::gcd(h, k);
  long long big = k / g, small = h / g;
  if (major < 0) big = -big;
  if (minor < 0) small = -small;
  return first_major ? LatticeVector{big, small} : LatticeVector{small, big};
}

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw Error(ErrorKind::DegenerateEdge, "a polygon needs at least 3 vertices");
  for (const auto& v : vertices_)
    if (!std::isfinite(v.x1) || !std::isfinite(v.x2))
      throw Error(ErrorKind::DegenerateEdge, "non-finite vertex coordinate");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      diameter_ = std::max(diameter_, norm(vertices_[i] - vertices_[j]));

  const double tol = 1e-12 * diameter_;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (norm(vertices_[i] - vertices_[j]) <= tol)
        throw Error(ErrorKind::DegenerateEdge,
                    "repeated vertex " + std::to_string(i) + "/" + std::to_string(j));

  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices_[(i + 1) % n] - vertices_[i];
    const Vec2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    if (cross(e0, e1) <= tol * diameter_)
      throw Error(ErrorKind::NonConvex, "vertex " + std::to_string((i + 1) % n) +
                                            " is not a strictly convex counter-clockwise turn");
  }

  area_ = polygon_area(vertices_);
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = vertices_[i];
    const Point2& q = vertices_[(i + 1) % n];
    const double c = cross(p, q);
    cx += (p.x1 + q.x1) * c;
    cy += (p.x2 + q.x2) * c;
  }
  centroid_ = {cx / (6.0 * area_), cy / (6.0 * area_)};

  edges_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Edge e;
    e.a = vertices_[i];
    e.b = vertices_[(i + 1) % n];
    e.length = norm(e.b - e.a);
    const Vec2 d = e.direction() / e.length;
    e.inward_normal = {-d.x2, d.x1};
    e.lattice_normal = rational_normal(e.inward_normal);
    e.measure_length =
        e.lattice_normal ? e.length / norm(e.lattice_normal->as_vec()) : e.length;
    edges_.push_back(e);
  }
}

double Polygon::signed_distance(const Point2& x) const {
  double d = edges_.front().signed_distance(x);
  for (const auto& e : edges_) d = std::min(d, e.signed_distance(x));
  return d;
}

Polytope::Polytope(Polygon polygon, std::vector<double> edge_weights, double A)
    : polygon_(std::move(polygon)), weights_(std::move(edge_weights)), A_(A) {
  if (weights_.size() != polygon_.size())
    throw Error(ErrorKind::ValidationError,
                "expected " + std::to_string(polygon_.size()) + " edge weights, got " +
                    std::to_string(weights_.size()));
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(ErrorKind::NonPositiveWeight, "edge weights must be positive and finite");
  if (!std::isfinite(A_)) throw Error(ErrorKind::ValidationError, "A must be finite");

  for (std::size_t k = 0; k < polygon_.size(); ++k) {
    const Edge& e = polygon_.edges()[k];
    boundary_mass_ += weights_[k] * e.measure_length;
    Vec2 n = e.inward_normal;
    if (e.lattice_normal)
      n = e.lattice_normal->as_vec();
    else
      euclidean_fallback_ = true;
    defining_.push_back({n.x1, n.x2, -dot(n, e.a)});
  }
}

Polytope build_polytope(const std::vector<Point2>& vertices, const std::vector<double>& weights,
                        std::optional<double> A) {
  Polygon polygon(vertices);
  if (A) return Polytope(std::move(polygon), weights, *A);
  // Construct once with a placeholder to validate weights, then fix A.
  Polytope probe(polygon, weights, 0.0);
  const double a = probe.boundary_mass() / probe.polygon().area();
  return Polytope(std::move(polygon), weights, a);
}

double integrate_region_poly(std::span<const Point2> v, const Polynomial& p) {
  if (v.size() < 3) return 0.0;
  Point2 c;
  for (const auto& q : v) c = c + q;
  c = c / static_cast<double>(v.size());

  // Reference-triangle moments: int s^i t^j = i! j! / (i+j+2)!.
  const int d = p.degree();
  std::vector<double> fact(static_cast<std::size_t>(d + 3), 1.0);
  for (std::size_t k = 1; k < fact.size(); ++k) fact[k] = fact[k - 1] * static_cast<double>(k);

  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point2& a = v[k];
    const Point2& b = v[(k + 1) % v.size()];
    const Vec2 e1 = a - c, e2 = b - c;
    const double jac = cross(e1, e2);  // twice the signed triangle area
    if (jac == 0.0) continue;
    const Polynomial q = p.compose({e1.x1, e2.x1, c.x1}, {e1.x2, e2.x2, c.x2});
    double ref = 0.0;
    for (int deg = 0; deg <= q.degree(); ++deg)
      for (int j = 0; j <= deg; ++j) {
        const double coef = q.coeff(deg - j, j);
        if (coef != 0.0) ref += coef * fact[deg - j] * fact[j] / fact[deg + 2];
      }
    total += jac * ref;
  }
  return total;
}

double integrate_region_poly(const Polygon& polygon, const Polynomial& p) {
  return integrate_region_poly(std::span<const Point2>(polygon.vertices()), p);
}

double integrate_segment_poly(const Point2& a, const Point2& b, const Polynomial& p) {
  const Vec2 d = b - a;
  const Polynomial q = p.compose({d.x1, 0.0, a.x1}, {d.x2, 0.0, a.x2});
  double s = 0.0;
  for (int i = 0; i <= q.degree(); ++i) s += q.coeff(i, 0) / static_cast<double>(i + 1);
  return s;
}

double integrate_boundary_poly(const Polytope& polytope, const Polynomial& p) {
  double total = 0.0;
  const auto& edges = polytope.polygon().edges();
  for (std::size_t k = 0; k < edges.size(); ++k)
    total += polytope.weights()[k] * edges[k].measure_length *
             integrate_segment_poly(edges[k].a, edges[k].b, p);
  return total;
}

std::vector<Point2> clip_halfplane(std::span<const Point2> v, const AffineFunction& lambda) {
  std::vector<Point2> out;
  const std::size_t n = v.size();
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = v[i];
    const Point2& q = v[(i + 1) % n];
    const double lp = lambda(p), lq = lambda(q);
    if (lp >= 0.0) out.push_back(p);
    if ((lp > 0.0 && lq < 0.0) || (lp < 0.0 && lq > 0.0)) {
      const double t = lp / (lp - lq);
      out.push_back(p + (q - p) * t);
    }
  }
  // Drop consecutive duplicates produced by vertices on the crease.
  std::vector<Point2> clean;
  for (const auto& p : out)
    if (clean.empty() || !(p == clean.back())) clean.push_back(p);
  while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
  if (clean.size() < 3 || polygon_area(clean) <= 0.0) return {};
  return clean;
}

std::vector<Point2> clip_halfplane(const Polygon& polygon, const AffineFunction& lambda) {
  return clip_halfplane(std::span<const Point2>(polygon.vertices()), lambda);
}

DelzantReport is_delzant(const Polytope& polytope) {
  DelzantReport report;
  const auto& edges = polytope.polygon().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (!edges[k].lattice_normal)
      throw Error(ErrorKind::IrrationalNormal,
                  "edge " + std::to_string(k) + " has no rational normal within 1e-9");
    report.normals.push_back(*edges[k].lattice_normal);
  }
  report.delzant = true;
  const std::size_t n = edges.size();
  for (std::size_t k = 0; k < n; ++k) {
    const LatticeVector& a = report.normals[(k + n - 1) % n];
    const LatticeVector& b = report.normals[k];
    const long long det = a.p * b.q - a.q * b.p;
    report.vertex_determinants.push_back(det);
    if (std::llabs(det) != 1) {
      report.delzant = false;
      if (report.message.empty())
        report.message = "vertex " + std::to_string(k) + " has normal determinant " +
                         std::to_string(det);
    }
  }
  if (report.delzant) report.message = "all vertex determinants are +-1";
  return report;
}

}  // namespace toric
