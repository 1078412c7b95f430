#pragma once

#include <memory>

#include "toric/common.hpp"
#include "toric/geometry.hpp"

namespace toric {

/// A convex function on an open planar domain, evaluable with derivatives.
class Potential {
 public:
  virtual ~Potential() = default;

  /// Value, gradient and Hessian. On the domain boundary the normal
  /// components may be infinite. Throws OutsideDomain outside the closure.
  virtual Jet jet(const Point2& x) const = 0;

  /// Value on the closed domain, using the boundary limit where needed.
  virtual double value(const Point2& x) const { return jet(x).value; }

  /// d^2/dt^2 u(x + t d) at t = 0. Finite on an edge when d is tangent to it.
  virtual double second_along(const Point2& x, const Vec2& d) const {
    return jet(x).hessian.quadratic_form(d);
  }

  /// Positive in the open domain, zero on its boundary, negative outside.
  virtual double domain_distance(const Point2& x) const = 0;

  bool in_closure(const Point2& x, double tol = 0.0) const { return domain_distance(x) >= -tol; }
};

/// u + lambda.
class AffineShifted final : public Potential {
 public:
  AffineShifted(std::shared_ptr<const Potential> base, AffineFunction lambda)
      : base_(std::move(base)), lambda_(lambda) {}
  Jet jet(const Point2& x) const override;
  double value(const Point2& x) const override { return base_->value(x) + lambda_(x); }
  double second_along(const Point2& x, const Vec2& d) const override {
    return base_->second_along(x, d);
  }
  double domain_distance(const Point2& x) const override { return base_->domain_distance(x); }

 private:
  std::shared_ptr<const Potential> base_;
  AffineFunction lambda_;
};

/// x -> s^-1 u(s x), the scaling that preserves Guillemin behaviour.
class Rescaled final : public Potential {
 public:
  Rescaled(std::shared_ptr<const Potential> base, double s);
  Jet jet(const Point2& x) const override;
  double value(const Point2& x) const override { return base_->value(x * s_) / s_; }
  double second_along(const Point2& x, const Vec2& d) const override {
    return s_ * base_->second_along(x * s_, d);
  }
  double domain_distance(const Point2& x) const override {
    return base_->domain_distance(x * s_) / s_;
  }

 private:
  std::shared_ptr<const Potential> base_;
  double s_;
};

/// Vertex chart: y = G (x - v) where the rows of G are the inward lattice
/// normals of the two edges meeting at v, so the edges map to the axes.
/// The charted potential is y -> u(v + G^-1 y).
class Charted final : public Potential {
 public:
  Charted(std::shared_ptr<const Potential> base, Point2 vertex, LatticeVector n_first,
          LatticeVector n_second);
  /// Chart at vertex k with y1 = l_{k-1} and y2 = l_k: edge k-1 becomes the
  /// axis {y1 = 0} and edge k the axis {y2 = 0}. Requires rational normals.
  static Charted at_vertex(std::shared_ptr<const Potential> base, const Polytope& polytope,
                           std::size_t k);

  Jet jet(const Point2& y) const override;
  double value(const Point2& y) const override { return base_->value(to_x(y)); }
  double second_along(const Point2& y, const Vec2& d) const override {
    return base_->second_along(to_x(y), m_apply(d));
  }
  double domain_distance(const Point2& y) const override {
    return base_->domain_distance(to_x(y));
  }

  Point2 to_x(const Point2& y) const { return vertex_ + m_apply(y); }
  Point2 to_y(const Point2& x) const;
  double determinant() const { return g11_ * g22_ - g12_ * g21_; }

 private:
  Vec2 m_apply(const Vec2& y) const;

  std::shared_ptr<const Potential> base_;
  Point2 vertex_;
  double g11_, g12_, g21_, g22_;  // G
  double m11_, m12_, m21_, m22_;  // G^-1
};

/// u0 = sum_k w_k^-1 l_k log l_k with l_k the lattice-normalized defining
/// function of edge k.
class CanonicalPotential final : public Potential {
 public:
  explicit CanonicalPotential(const Polytope& polytope);
  Jet jet(const Point2& x) const override;
  double value(const Point2& x) const override;
  double second_along(const Point2& x, const Vec2& d) const override;
  double domain_distance(const Point2& x) const override;

  const Polytope& polytope() const { return polytope_; }

 private:
  /// Defining-function values, with round-off negatives on an edge clamped to 0.
  std::vector<double> edge_values(const Point2& x) const;

  Polytope polytope_;
};

/// Jet of the canonical potential; throws OutsidePolygon outside the closed polygon.
Jet canonical_potential(const Polytope& polytope, const Point2& x);

/// Hessian, inverse Hessian, determinant J and Legendre coordinates xi.
struct HessianData {
  Sym2 u;
  Sym2 inverse;
  double J = 0.0;
  Vec2 xi;
};

/// Throws NotPositiveDefinite when the Hessian is not positive definite.
HessianData hessian_data(const Jet& jet);

/// Centered-difference Abreu operator sum_ij d^2 u^{ij} / dx_i dx_j at x,
/// from exact inverse Hessians at spacing h. order 2 uses the 3x3 stencil,
/// order 4 the 5x5 tensor-product stencil.
double abreu_at(const Potential& u, const Point2& x, double h, int order = 2);

/// V^i = -sum_j d u^{ij} / dx_j by centered differences of spacing h.
Vec2 vector_field_at(const Potential& u, const Point2& x, double h);

}  // namespace toric
