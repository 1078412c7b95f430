#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toric/common.hpp"
#include "toric/polynomial.hpp"

namespace toric {

/// Primitive integer vector.
struct LatticeVector {
  long long p = 0;
  long long q = 0;
  Vec2 as_vec() const { return {static_cast<double>(p), static_cast<double>(q)}; }
};

struct Edge {
  Point2 a;
  Point2 b;
  Vec2 inward_normal;  // Euclidean unit normal pointing into P
  double length = 0.0;
  /// Primitive inward integer normal, when the normal is rational.
  std::optional<LatticeVector> lattice_normal;
  /// Length of the edge in the measure ds used for the boundary integrals:
  /// lattice length for rational normals, Euclidean length otherwise.
  double measure_length = 0.0;

  Vec2 direction() const { return b - a; }
  /// Euclidean signed distance to the edge line, positive inside.
  double signed_distance(const Point2& x) const { return dot(inward_normal, x - a); }
};

/// Strictly convex polygon with counter-clockwise vertices.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return vertices_.size(); }

  double area() const { return area_; }
  Point2 centroid() const { return centroid_; }
  double diameter() const { return diameter_; }

  /// min over edges of the Euclidean signed distance (positive inside).
  double signed_distance(const Point2& x) const;
  bool contains(const Point2& x, double tol = 0.0) const { return signed_distance(x) >= -tol; }

 private:
  std::vector<Point2> vertices_;
  std::vector<Edge> edges_;
  double area_ = 0.0;
  Point2 centroid_;
  double diameter_ = 0.0;
};

/// The problem datum (P, sigma, A): polygon, per-edge weights and the
/// constant scalar-curvature target.
class Polytope {
 public:
  Polytope(Polygon polygon, std::vector<double> edge_weights, double A);

  const Polygon& polygon() const { return polygon_; }
  const std::vector<double>& weights() const { return weights_; }
  double A() const { return A_; }
  /// sigma(dP).
  double boundary_mass() const { return boundary_mass_; }
  /// Set when some edge normal is irrational and Euclidean arc length is used.
  bool euclidean_fallback() const { return euclidean_fallback_; }

  /// Lattice-normalized affine defining function l_k of edge k (l_k >= 0 on P).
  /// Falls back to the Euclidean distance for irrational normals.
  const std::vector<AffineFunction>& defining_functions() const { return defining_; }

 private:
  Polygon polygon_;
  std::vector<double> weights_;
  double A_;
  double boundary_mass_ = 0.0;
  bool euclidean_fallback_ = false;
  std::vector<AffineFunction> defining_;
};

/// Builds and validates a Polytope. With A == nullopt the constant is set by
/// mass matching, A = sigma(dP) / Area(P).
Polytope build_polytope(const std::vector<Point2>& vertices, const std::vector<double>& weights,
                        std::optional<double> A);

/// Exact integral of a polynomial over a convex region given by its
/// counter-clockwise vertex list (fewer than three vertices integrate to 0).
double integrate_region_poly(std::span<const Point2> vertices, const Polynomial& p);
double integrate_region_poly(const Polygon& polygon, const Polynomial& p);

/// Exact integral of p along the segment [a, b] with respect to the
/// normalized parameter t in [0, 1] (multiply by a length for arc length).
double integrate_segment_poly(const Point2& a, const Point2& b, const Polynomial& p);

/// sum_k w_k int_{edge k} p ds_k.
double integrate_boundary_poly(const Polytope& polytope, const Polynomial& p);

/// P intersected with the closed half-plane {lambda >= 0}; empty vector when
/// the intersection has no interior. Sutherland-Hodgman single-plane clip.
std::vector<Point2> clip_halfplane(std::span<const Point2> vertices, const AffineFunction& lambda);
std::vector<Point2> clip_halfplane(const Polygon& polygon, const AffineFunction& lambda);

double polygon_area(std::span<const Point2> vertices);

/// Best rational approximation of the direction of a unit normal by a
/// primitive integer vector; nullopt when no denominator <= 1e6 is within 1e-9.
std::optional<LatticeVector> rational_normal(const Vec2& unit_normal);

struct DelzantReport {
  bool delzant = false;
  std::vector<LatticeVector> normals;
  /// Determinant of the two normals meeting at vertex k (edges k-1 and k).
  std::vector<long long> vertex_determinants;
  std::string message;
};

/// Throws IrrationalNormal when an edge normal is not rational.
DelzantReport is_delzant(const Polytope& polytope);

}  // namespace toric
