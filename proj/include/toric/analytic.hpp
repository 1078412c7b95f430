#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>

#include "toric/potential.hpp"

namespace toric {

// Edge, vertex and square models. All are zero on the relevant boundary by
// 0 log 0 = 0 and have infinite normal second derivatives there.

/// sum_i x_i log x_i on the open quadrant: the flat vertex model.
class FlatModel final : public Potential {
 public:
  Jet jet(const Point2& x) const override;
  double value(const Point2& x) const override;
  double domain_distance(const Point2& x) const override { return std::min(x.x1, x.x2); }
};

/// x1 log x1 + (x2 - a x1)^2 on the half-plane x1 > 0; a = 0 is the flat edge model.
class ShearModel final : public Potential {
 public:
  explicit ShearModel(double a = 0.0) : a_(a) {}
  Jet jet(const Point2& x) const override;
  double value(const Point2& x) const override;
  double domain_distance(const Point2& x) const override { return x.x1; }

 private:
  double a_;
};

/// sum_i (1 + x_i) log(1 + x_i) + (1 - x_i) log(1 - x_i) on (-1, 1)^2.
/// Solves the Abreu equation with A = 2 and unit weights.
class SquareProduct final : public Potential {
 public:
  Jet jet(const Point2& x) const override;
  double value(const Point2& x) const override;
  double domain_distance(const Point2& x) const override;
};

/// |x|^2 / 2 on the whole plane.
class QuadraticModel final : public Potential {
 public:
  Jet jet(const Point2& x) const override { return {0.5 * dot(x, x), x, {1.0, 0.0, 1.0}}; }
  double domain_distance(const Point2&) const override {
    return std::numeric_limits<double>::infinity();
  }
};

enum class ModelName { flat, shear, square_product };

/// Closed-form jet of a named model; a is the shear parameter.
Jet model_potential(ModelName name, const Point2& x, double a = 0.0);

/// Square product factor U(x) = (1 + x) log(1 + x) + (1 - x) log(1 - x).
double square_factor(double x);

struct FPair {
  double plus = 0.0;
  double minus = 0.0;
};

/// F_+- (H, r) = (+-H + sqrt(H^2 + r^2)) / 2, the small branch taken from
/// F_+ F_- = r^2 / 4. Throws OriginSingular at (0, 0).
FPair F_pm(double H, double r);

struct JoyceParams {
  double a1 = 1.0;
  double a2 = 1.0;
};

/// x = (y1 + a1 y1 y2, y2 + a2 y1 y2).
Point2 joyce_map(const JoyceParams& p, const Point2& y);

/// Inverse of joyce_map by damped Newton from y = x. Throws NewtonDiverged.
Point2 joyce_inverse(const JoyceParams& p, const Point2& x);

/// Closed-form inverse in sigma = a2 x1 - a1 x2, tau = a2 x1 + a1 x2:
/// a2 y1 = ((sigma - 1) + sqrt(sigma^2 + 2 tau + 1)) / 2,
/// a1 y2 = ((-sigma - 1) + sqrt(sigma^2 + 2 tau + 1)) / 2,
/// evaluated in rationalized form.
Point2 joyce_inverse_closed(const JoyceParams& p, const Point2& x);

/// The naive form 2 y1 = (sigma - 1) + sqrt(sigma^2 + tau/a2 + 1),
/// 2 y2 = (1 - sigma) + sqrt(sigma^2 + tau/a1 + 1). Kept for cross-checking;
/// it does not invert joyce_map.
Point2 joyce_inverse_naive(const JoyceParams& p, const Point2& x);

struct JoyceValue {
  double u = 0.0;
  Vec2 xi;
  Point2 y;
};

/// u = x1 log y1 + x2 log y2 + (a2 y1^2 + a1 y2^2) / 2 with its gradient
/// xi1 = log y1 + a2 (y1 - y2) + 1, xi2 = log y2 + a1 (y2 - y1) + 1.
JoyceValue joyce_potential(const JoyceParams& p, const Point2& x);

/// Zero scalar curvature potential on the open quadrant.
class JoycePotential final : public Potential {
 public:
  explicit JoycePotential(JoyceParams p);
  Jet jet(const Point2& x) const override;
  double value(const Point2& x) const override;
  double domain_distance(const Point2& x) const override { return std::min(x.x1, x.x2); }
  const JoyceParams& params() const { return p_; }

 private:
  JoyceParams p_;
};

/// r = 2 sqrt(y1 y2) for the Joyce coordinates y of x.
double joyce_r(const JoyceParams& p, const Point2& x);

/// Axially symmetric field xi(r, H) with an optional conjugate x(r, H).
struct AxiSymField {
  std::function<double(double r, double H)> xi;
  std::function<double(double r, double H)> x;
};

struct AxiSymPatch {
  double r_min = 1.0;
  double r_max = 2.0;
  double H_min = 1.0;
  double H_max = 2.0;
  int samples = 21;  // per direction
  double h = 1e-4;   // difference step
};

struct AxiSymResidual {
  double harmonic = 0.0;    // max |xi_HH + r^-1 (r xi_r)_r|
  double conjugate = 0.0;   // max |x_HH + r (r^-1 x_r)_r|, when x is set
  double first_order = 0.0; // max of |x_r - r xi_H| and |x_H + r xi_r|, when x is set
};

AxiSymResidual check_axisym_harmonic(const AxiSymField& field, const AxiSymPatch& patch);

/// One-dimensional family with U'' = 1 / f_eps, where f_eps = x^2 + eps^2 on
/// |x| <= 1/2, 1 - |x| on 3/4 <= |x| <= 1 and a quintic C^2 blend between.
class OneDFamily {
 public:
  enum class Normalization { at_0, at_plus_half, at_minus_half };

  explicit OneDFamily(double eps);

  double eps() const { return eps_; }
  double f(double x) const;
  double f_prime(double x) const;
  double f_second(double x) const;

  /// U'(x) with U'(x0) = 0 at the normalization point x0.
  double dU(double x, Normalization n) const;
  /// U(x) with U(x0) = U'(x0) = 0.
  double U(double x, Normalization n) const;

  /// n_eps = U'_-(x) - U'_+(x) = int_{-1/2}^{1/2} f_eps^-1, by adaptive quadrature.
  double n_eps() const;
  /// Closed-form core integral 2 eps^-1 arctan(1 / (2 eps)).
  double n_eps_closed_form() const;

 private:
  /// int_0^x f^-1 for |x| < 1.
  double primitive(double x) const;

  double eps_;
};

}  // namespace toric
