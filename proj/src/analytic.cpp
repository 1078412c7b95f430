#include "toric/analytic.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

namespace toric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::OutsideDomain, what);
}

/// Second derivative of x log x, infinite at 0.
double inv_or_inf(double x) { return x > 0.0 ? 1.0 / x : kInf; }

template <class F>
double gk_integrate(F f, double a, double b) {
  if (a == b) return 0.0;
  if (b < a) return -gk_integrate(f, b, a);
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

}  // namespace

// ---------------------------------------------------------------- models

Jet FlatModel::jet(const Point2& x) const {
  require(x.x1 >= 0.0 && x.x2 >= 0.0, "flat model is defined on the closed quadrant");
  Jet j;
  j.value = xlogx(x.x1) + xlogx(x.x2);
  j.gradient = {x.x1 > 0.0 ? std::log(x.x1) + 1.0 : -kInf,
                x.x2 > 0.0 ? std::log(x.x2) + 1.0 : -kInf};
  j.hessian = {inv_or_inf(x.x1), 0.0, inv_or_inf(x.x2)};
  return j;
}

double FlatModel::value(const Point2& x) const {
  require(x.x1 >= 0.0 && x.x2 >= 0.0, "flat model is defined on the closed quadrant");
  return xlogx(x.x1) + xlogx(x.x2);
}

Jet ShearModel::jet(const Point2& x) const {
  require(x.x1 >= 0.0, "shear model is defined on the closed half-plane x1 >= 0");
  const double t = x.x2 - a_ * x.x1;
  Jet j;
  j.value = xlogx(x.x1) + t * t;
  j.gradient = {(x.x1 > 0.0 ? std::log(x.x1) + 1.0 : -kInf) - 2.0 * a_ * t, 2.0 * t};
  j.hessian = {inv_or_inf(x.x1) + 2.0 * a_ * a_, -2.0 * a_, 2.0};
  return j;
}

double ShearModel::value(const Point2& x) const {
  require(x.x1 >= 0.0, "shear model is defined on the closed half-plane x1 >= 0");
  const double t = x.x2 - a_ * x.x1;
  return xlogx(x.x1) + t * t;
}

double square_factor(double x) { return xlogx(1.0 + x) + xlogx(1.0 - x); }

Jet SquareProduct::jet(const Point2& x) const {
  require(std::abs(x.x1) <= 1.0 && std::abs(x.x2) <= 1.0, "square product is defined on [-1,1]^2");
  const auto d1 = [](double t) {
    if (t >= 1.0) return kInf;
    if (t <= -1.0) return -kInf;
    return std::log1p(t) - std::log1p(-t);
  };
  const auto d2 = [](double t) { return std::abs(t) < 1.0 ? 2.0 / ((1.0 - t) * (1.0 + t)) : kInf; };
  Jet j;
  j.value = square_factor(x.x1) + square_factor(x.x2);
  j.gradient = {d1(x.x1), d1(x.x2)};
  j.hessian = {d2(x.x1), 0.0, d2(x.x2)};
  return j;
}

double SquareProduct::value(const Point2& x) const {
  require(std::abs(x.x1) <= 1.0 && std::abs(x.x2) <= 1.0, "square product is defined on [-1,1]^2");
  return square_factor(x.x1) + square_factor(x.x2);
}

double SquareProduct::domain_distance(const Point2& x) const {
  return std::min(1.0 - std::abs(x.x1), 1.0 - std::abs(x.x2));
}

Jet model_potential(ModelName name, const Point2& x, double a) {
  switch (name) {
    case ModelName::flat: return FlatModel().jet(x);
    case ModelName::shear: return ShearModel(a).jet(x);
    case ModelName::square_product: return SquareProduct().jet(x);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown model");
}

// ---------------------------------------------------------------- Joyce family

FPair F_pm(double H, double r) {
  if (r < 0.0) throw Error(ErrorKind::InvalidArgument, "r must be non-negative");
  if (H == 0.0 && r == 0.0) throw Error(ErrorKind::OriginSingular, "F_pm is singular at (0,0)");
  const double s = std::hypot(H, r);
  FPair f;
  if (H >= 0.0) {
    f.plus = 0.5 * (H + s);
    f.minus = r * r / (4.0 * f.plus);
  } else {
    f.minus = 0.5 * (s - H);
    f.plus = r * r / (4.0 * f.minus);
  }
  return f;
}

namespace {

void check_params(const JoyceParams& p) {
  if (!(p.a1 > 0.0) || !(p.a2 > 0.0))
    throw Error(ErrorKind::InvalidArgument, "Joyce parameters must be positive");
}

void check_quadrant(const Point2& x) {
  if (!(x.x1 >= 0.0) || !(x.x2 >= 0.0))
    throw Error(ErrorKind::OutsideDomain, "point outside the closed quadrant");
}

}  // namespace

Point2 joyce_map(const JoyceParams& p, const Point2& y) {
  check_params(p);
  check_quadrant(y);
  const double yy = y.x1 * y.x2;
  return {y.x1 + p.a1 * yy, y.x2 + p.a2 * yy};
}

Point2 joyce_inverse(const JoyceParams& p, const Point2& x) {
  check_params(p);
  check_quadrant(x);
  const double scale = 1.0 + std::max(x.x1, x.x2);
  const auto residual = [&](const Point2& y) {
    const double yy = y.x1 * y.x2;
    return Vec2{y.x1 + p.a1 * yy - x.x1, y.x2 + p.a2 * yy - x.x2};
  };
  Point2 y = x;
  Vec2 F = residual(y);
  for (int iter = 0; iter < 200; ++iter) {
    const double fn = norm(F);
    if (fn <= 1e-15 * scale) return y;
    // J = dx/dy; solve J d = -F.
    const double j11 = 1.0 + p.a1 * y.x2, j12 = p.a1 * y.x1;
    const double j21 = p.a2 * y.x2, j22 = 1.0 + p.a2 * y.x1;
    const double det = j11 * j22 - j12 * j21;
    Vec2 d{(-F.x1 * j22 + F.x2 * j12) / det, (F.x1 * j21 - F.x2 * j11) / det};
    double t = 1.0;
    // Stay in the closed quadrant.
    if (y.x1 + d.x1 < 0.0) t = std::min(t, 0.5 * y.x1 / -d.x1);
    if (y.x2 + d.x2 < 0.0) t = std::min(t, 0.5 * y.x2 / -d.x2);
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const Point2 trial = y + d * t;
      const Vec2 Ft = residual(trial);
      if (norm(Ft) < fn) {
        y = trial;
        F = Ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (fn <= 1e-12 * scale) return y;
      break;
    }
  }
  if (norm(F) <= 1e-12 * scale) return y;
  throw Error(ErrorKind::NewtonDiverged, "Joyce inverse did not converge");
}

Point2 joyce_inverse_closed(const JoyceParams& p, const Point2& x) {
  check_params(p);
  check_quadrant(x);
  const double sigma = p.a2 * x.x1 - p.a1 * x.x2;
  const double tau = p.a2 * x.x1 + p.a1 * x.x2;
  const double root = std::sqrt(sigma * sigma + 2.0 * tau + 1.0);
  // Both denominators exceed 1 because root > |sigma|.
  const double Y1 = 2.0 * p.a2 * x.x1 / (root - sigma + 1.0);
  const double Y2 = 2.0 * p.a1 * x.x2 / (root + sigma + 1.0);
  return {Y1 / p.a2, Y2 / p.a1};
}

Point2 joyce_inverse_naive(const JoyceParams& p, const Point2& x) {
  check_params(p);
  check_quadrant(x);
  const double sigma = p.a2 * x.x1 - p.a1 * x.x2;
  const double tau = p.a1 * x.x2 + p.a2 * x.x1;
  return {0.5 * ((sigma - 1.0) + std::sqrt(sigma * sigma + tau / p.a2 + 1.0)),
          0.5 * ((1.0 - sigma) + std::sqrt(sigma * sigma + tau / p.a1 + 1.0))};
}

JoyceValue joyce_potential(const JoyceParams& p, const Point2& x) {
  JoyceValue v;
  v.y = joyce_inverse(p, x);
  const double y1 = v.y.x1, y2 = v.y.x2;
  v.u = (x.x1 > 0.0 ? x.x1 * std::log(y1) : 0.0) + (x.x2 > 0.0 ? x.x2 * std::log(y2) : 0.0) +
        0.5 * (p.a2 * y1 * y1 + p.a1 * y2 * y2);
  v.xi = {(y1 > 0.0 ? std::log(y1) : -kInf) + p.a2 * (y1 - y2) + 1.0,
          (y2 > 0.0 ? std::log(y2) : -kInf) + p.a1 * (y2 - y1) + 1.0};
  return v;
}

JoycePotential::JoycePotential(JoyceParams p) : p_(p) { check_params(p_); }

double JoycePotential::value(const Point2& x) const { return joyce_potential(p_, x).u; }

Jet JoycePotential::jet(const Point2& x) const {
  const JoyceValue v = joyce_potential(p_, x);
  const double y1 = v.y.x1, y2 = v.y.x2;
  Jet j;
  j.value = v.u;
  j.gradient = v.xi;
  if (y1 <= 0.0 || y2 <= 0.0) {
    // On an axis only the tangential entry stays finite; it is not needed here.
    j.hessian = {y1 > 0.0 ? 0.0 : kInf, 0.0, y2 > 0.0 ? 0.0 : kInf};
    return j;
  }
  // Hess = (d xi / d y)(d x / d y)^-1.
  const double b11 = 1.0 / y1 + p_.a2, b12 = -p_.a2, b21 = -p_.a1, b22 = 1.0 / y2 + p_.a1;
  const double c11 = 1.0 + p_.a1 * y2, c12 = p_.a1 * y1, c21 = p_.a2 * y2, c22 = 1.0 + p_.a2 * y1;
  const double det = c11 * c22 - c12 * c21;
  const double i11 = c22 / det, i12 = -c12 / det, i21 = -c21 / det, i22 = c11 / det;
  const double h11 = b11 * i11 + b12 * i21;
  const double h12 = b11 * i12 + b12 * i22;
  const double h21 = b21 * i11 + b22 * i21;
  const double h22 = b21 * i12 + b22 * i22;
  j.hessian = {h11, 0.5 * (h12 + h21), h22};
  return j;
}

double joyce_r(const JoyceParams& p, const Point2& x) {
  const Point2 y = joyce_inverse(p, x);
  return 2.0 * std::sqrt(y.x1 * y.x2);
}

// ---------------------------------------------------------------- axisymmetric fields

AxiSymResidual check_axisym_harmonic(const AxiSymField& field, const AxiSymPatch& patch) {
  if (!field.xi) throw Error(ErrorKind::InvalidArgument, "axisymmetric field needs xi");
  if (patch.r_min - patch.h <= 0.0)
    throw Error(ErrorKind::InvalidArgument, "patch must stay off the axis r = 0");
  AxiSymResidual out;
  const double h = patch.h;
  const int n = std::max(patch.samples, 2);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double r = patch.r_min + (patch.r_max - patch.r_min) * i / (n - 1);
      const double H = patch.H_min + (patch.H_max - patch.H_min) * k / (n - 1);
      const auto& xi = field.xi;
      const double xi0 = xi(r, H);
      const double xi_HH = (xi(r, H + h) - 2.0 * xi0 + xi(r, H - h)) / (h * h);
      const double xi_rr = (xi(r + h, H) - 2.0 * xi0 + xi(r - h, H)) / (h * h);
      const double xi_r = (xi(r + h, H) - xi(r - h, H)) / (2.0 * h);
      const double xi_H = (xi(r, H + h) - xi(r, H - h)) / (2.0 * h);
      out.harmonic = std::max(out.harmonic, std::abs(xi_HH + xi_rr + xi_r / r));
      if (field.x) {
        const auto& x = field.x;
        const double x0 = x(r, H);
        const double x_HH = (x(r, H + h) - 2.0 * x0 + x(r, H - h)) / (h * h);
        const double x_rr = (x(r + h, H) - 2.0 * x0 + x(r - h, H)) / (h * h);
        const double x_r = (x(r + h, H) - x(r - h, H)) / (2.0 * h);
        const double x_H = (x(r, H + h) - x(r, H - h)) / (2.0 * h);
        out.conjugate = std::max(out.conjugate, std::abs(x_HH + x_rr - x_r / r));
        out.first_order = std::max(
            {out.first_order, std::abs(x_r - r * xi_H), std::abs(x_H + r * xi_r)});
      }
    }
  return out;
}

// ---------------------------------------------------------------- 1D family

OneDFamily::OneDFamily(double eps) : eps_(eps) {
  if (!(eps > 0.0) || eps > 1.0) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1]");
}

namespace {

struct Blend {
  double S, S1, S2;  // smoothstep and its t-derivatives
};

/// Quintic smoothstep on t in [1/2, 3/4]; S, S', S'' vanish or equal 1 at the ends.
Blend blend(double t) {
  const double s = 4.0 * (t - 0.5);
  return {s * s * s * (10.0 - 15.0 * s + 6.0 * s * s),
          4.0 * 30.0 * s * s * (1.0 - s) * (1.0 - s),
          16.0 * 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)};
}

}  // namespace

double OneDFamily::f(double x) const {
  const double t = std::abs(x);
  if (t > 1.0) throw Error(ErrorKind::OutsideDomain, "f_eps is defined on [-1, 1]");
  if (t <= 0.5) return t * t + eps_ * eps_;
  if (t >= 0.75) return 1.0 - t;
  const Blend b = blend(t);
  const double g0 = t * t + eps_ * eps_, g1 = 1.0 - t;
  return g0 + b.S * (g1 - g0);
}

double OneDFamily::f_prime(double x) const {
  const double t = std::abs(x);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  if (t > 1.0) throw Error(ErrorKind::OutsideDomain, "f_eps is defined on [-1, 1]");
  if (t <= 0.5) return 2.0 * x;
  if (t >= 0.75) return -sign;
  const Blend b = blend(t);
  const double g0 = t * t + eps_ * eps_, g1 = 1.0 - t;
  return sign * (2.0 * t + b.S1 * (g1 - g0) + b.S * (-1.0 - 2.0 * t));
}

double OneDFamily::f_second(double x) const {
  const double t = std::abs(x);
  if (t > 1.0) throw Error(ErrorKind::OutsideDomain, "f_eps is defined on [-1, 1]");
  if (t <= 0.5) return 2.0;
  if (t >= 0.75) return 0.0;
  const Blend b = blend(t);
  const double g0 = t * t + eps_ * eps_, g1 = 1.0 - t;
  return 2.0 + b.S2 * (g1 - g0) + 2.0 * b.S1 * (-1.0 - 2.0 * t) + b.S * (-2.0);
}

double OneDFamily::primitive(double x) const {
  const double t = std::abs(x);
  if (t >= 1.0) throw Error(ErrorKind::OutsideDomain, "U' diverges at |x| = 1");
  const double sign = x < 0.0 ? -1.0 : 1.0;
  if (t <= 0.5) return std::atan(x / eps_) / eps_;
  double v = std::atan(0.5 / eps_) / eps_;
  // 1/f is a smooth rational function on the blend interval; fixed Gauss suffices.
  v += boost::math::quadrature::gauss<double, 30>::integrate([this](double s) { return 1.0 / f(s); },
                                                             0.5, std::min(t, 0.75));
  if (t > 0.75) v += std::log(0.25 / (1.0 - t));
  return sign * v;
}

namespace {

double anchor(OneDFamily::Normalization n) {
  switch (n) {
    case OneDFamily::Normalization::at_0: return 0.0;
    case OneDFamily::Normalization::at_plus_half: return 0.5;
    case OneDFamily::Normalization::at_minus_half: return -0.5;
  }
  return 0.0;
}

}  // namespace

double OneDFamily::dU(double x, Normalization n) const {
  return primitive(x) - primitive(anchor(n));
}

double OneDFamily::U(double x, Normalization n) const {
  const double x0 = anchor(n);
  const double p0 = primitive(x0);
  // Split at the kinks of the piecewise definition of f.
  double knots[] = {-0.75, -0.5, 0.5, 0.75};
  double lo = std::min(x, x0), hi = std::max(x, x0);
  // On [-1/2, 1/2] the primitive atan(s/eps)/eps integrates in closed form.
  const auto core = [this](double s) {
    return (s * std::atan(s / eps_) - 0.5 * eps_ * std::log1p(s * s / (eps_ * eps_))) / eps_;
  };
  const auto piece = [&](double a, double b) {
    if (a >= -0.5 && b <= 0.5) return core(b) - core(a) - p0 * (b - a);
    return gk_integrate([&](double s) { return primitive(s) - p0; }, a, b);
  };
  double total = 0.0, a = lo;
  for (double k : knots)
    if (k > a && k < hi) {
      total += piece(a, k);
      a = k;
    }
  total += piece(a, hi);
  return x >= x0 ? total : -total;
}

double OneDFamily::n_eps() const {
  const auto inv = [this](double s) { return 1.0 / f(s); };
  return gk_integrate(inv, -0.5, 0.0) + gk_integrate(inv, 0.0, 0.5);
}

double OneDFamily::n_eps_closed_form() const { return 2.0 * std::atan(0.5 / eps_) / eps_; }

}  // namespace toric
