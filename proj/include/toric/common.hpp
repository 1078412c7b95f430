#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace toric {

/// A point (or vector) in the plane.
struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Point2 operator+(const Point2& o) const { return {x1 + o.x1, x2 + o.x2}; }
  constexpr Point2 operator-(const Point2& o) const { return {x1 - o.x1, x2 - o.x2}; }
  constexpr Point2 operator-() const { return {-x1, -x2}; }
  constexpr Point2 operator*(double s) const { return {x1 * s, x2 * s}; }
  constexpr Point2 operator/(double s) const { return {x1 / s, x2 / s}; }
  constexpr bool operator==(const Point2&) const = default;
};

using Vec2 = Point2;

inline constexpr Point2 operator*(double s, const Point2& p) { return p * s; }
inline constexpr double dot(const Vec2& a, const Vec2& b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline constexpr double cross(const Vec2& a, const Vec2& b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(const Vec2& a) { return std::hypot(a.x1, a.x2); }

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  constexpr double det() const { return a11 * a22 - a12 * a12; }
  constexpr double trace() const { return a11 + a22; }
  constexpr Sym2 operator+(const Sym2& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
  constexpr Sym2 operator-(const Sym2& o) const { return {a11 - o.a11, a12 - o.a12, a22 - o.a22}; }
  constexpr Sym2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }
  constexpr Vec2 apply(const Vec2& v) const {
    return {a11 * v.x1 + a12 * v.x2, a12 * v.x1 + a22 * v.x2};
  }
  constexpr Sym2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, a11 / d};
  }
  /// Strict positive definiteness by leading minors.
  constexpr bool positive_definite() const { return a11 > 0.0 && det() > 0.0; }

  /// v^T M v, skipping products that involve a zero component so that an
  /// infinite normal entry paired with a purely tangential v stays finite.
  double quadratic_form(const Vec2& v) const {
    double s = 0.0;
    if (v.x1 != 0.0) s += a11 * v.x1 * v.x1;
    if (v.x1 != 0.0 && v.x2 != 0.0) s += 2.0 * a12 * v.x1 * v.x2;
    if (v.x2 != 0.0) s += a22 * v.x2 * v.x2;
    return s;
  }
};

/// tr(A B) for symmetric A, B.
inline constexpr double trace_product(const Sym2& a, const Sym2& b) {
  return a.a11 * b.a11 + 2.0 * a.a12 * b.a12 + a.a22 * b.a22;
}

/// lambda(x) = a1*x1 + a2*x2 + b.
struct AffineFunction {
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 0.0;

  constexpr double operator()(const Point2& x) const { return a1 * x.x1 + a2 * x.x2 + b; }
  constexpr AffineFunction operator-() const { return {-a1, -a2, -b}; }
  constexpr AffineFunction operator*(double s) const { return {a1 * s, a2 * s, b * s}; }
  constexpr Vec2 gradient() const { return {a1, a2}; }
  constexpr bool is_zero() const { return a1 == 0.0 && a2 == 0.0 && b == 0.0; }
};

/// Value, gradient and Hessian of a scalar function at a point.
struct Jet {
  double value = 0.0;
  Vec2 gradient;
  Sym2 hessian;
};

enum class ErrorKind {
  NonConvex,
  DegenerateEdge,
  NonPositiveWeight,
  IrrationalNormal,
  ZeroHinge,
  NotStable,
  OutsidePolygon,
  OutsideDomain,
  NotPositiveDefinite,
  InfeasibleStart,
  FutakiGate,
  NotDelzant,
  GridMisaligned,
  ProbeOutside,
  EmptyX,
  PathOutside,
  OriginSingular,
  NewtonDiverged,
  ParseError,
  ValidationError,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace toric
