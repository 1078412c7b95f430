#include "toric/potential.hpp"

#include <cmath>
#include <limits>

namespace toric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Jet AffineShifted::jet(const Point2& x) const {
  Jet j = base_->jet(x);
  j.value += lambda_(x);
  j.gradient = j.gradient + lambda_.gradient();
  return j;
}

Rescaled::Rescaled(std::shared_ptr<const Potential> base, double s)
    : base_(std::move(base)), s_(s) {
  if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale factor must be positive");
}

Jet Rescaled::jet(const Point2& x) const {
  Jet j = base_->jet(x * s_);
  j.value /= s_;
  j.hessian = j.hessian * s_;
  return j;
}

Charted::Charted(std::shared_ptr<const Potential> base, Point2 vertex, LatticeVector n_first,
                 LatticeVector n_second)
    : base_(std::move(base)), vertex_(vertex) {
  g11_ = static_cast<double>(n_first.p);
  g12_ = static_cast<double>(n_first.q);
  g21_ = static_cast<double>(n_second.p);
  g22_ = static_cast<double>(n_second.q);
  const double det = determinant();
  if (det == 0.0) throw Error(ErrorKind::InvalidArgument, "chart normals are parallel");
  m11_ = g22_ / det;
  m12_ = -g12_ / det;
  m21_ = -g21_ / det;
  m22_ = g11_ / det;
}

Charted Charted::at_vertex(std::shared_ptr<const Potential> base, const Polytope& polytope,
                           std::size_t k) {
  const auto& edges = polytope.polygon().edges();
  const std::size_t n = edges.size();
  const Edge& prev = edges[(k + n - 1) % n];
  const Edge& next = edges[k % n];
  if (!prev.lattice_normal || !next.lattice_normal)
    throw Error(ErrorKind::IrrationalNormal, "vertex chart needs rational edge normals");
  return Charted(std::move(base), next.a, *prev.lattice_normal, *next.lattice_normal);
}

Vec2 Charted::m_apply(const Vec2& y) const {
  return {m11_ * y.x1 + m12_ * y.x2, m21_ * y.x1 + m22_ * y.x2};
}

Point2 Charted::to_y(const Point2& x) const {
  const Vec2 d = x - vertex_;
  return {g11_ * d.x1 + g12_ * d.x2, g21_ * d.x1 + g22_ * d.x2};
}

Jet Charted::jet(const Point2& y) const {
  const Jet j = base_->jet(to_x(y));
  Jet out;
  out.value = j.value;
  // grad_y = M^T grad_x, Hess_y = M^T H M. A zero entry of M annihilates an
  // infinite boundary derivative instead of producing NaN.
  const auto mul = [](double m, double v) { return m == 0.0 ? 0.0 : m * v; };
  out.gradient = {mul(m11_, j.gradient.x1) + mul(m21_, j.gradient.x2),
                  mul(m12_, j.gradient.x1) + mul(m22_, j.gradient.x2)};
  const Vec2 c1{m11_, m21_}, c2{m12_, m22_};
  out.hessian.a11 = j.hessian.quadratic_form(c1);
  out.hessian.a22 = j.hessian.quadratic_form(c2);
  out.hessian.a12 = mul(c1.x1 * c2.x1, j.hessian.a11) + mul(c1.x1 * c2.x2 + c1.x2 * c2.x1, j.hessian.a12) +
                    mul(c1.x2 * c2.x2, j.hessian.a22);
  return out;
}

CanonicalPotential::CanonicalPotential(const Polytope& polytope) : polytope_(polytope) {}

double CanonicalPotential::domain_distance(const Point2& x) const {
  return polytope_.polygon().signed_distance(x);
}

std::vector<double> CanonicalPotential::edge_values(const Point2& x) const {
  const auto& ell = polytope_.defining_functions();
  const double tol = 1e-12 * polytope_.polygon().diameter();
  std::vector<double> values(ell.size());
  for (std::size_t k = 0; k < ell.size(); ++k) {
    double l = ell[k](x);
    if (l < 0.0) {
      if (l < -tol * norm(ell[k].gradient()))
        throw Error(ErrorKind::OutsidePolygon, "point lies outside the polygon");
      l = 0.0;
    }
    values[k] = l;
  }
  return values;
}

double CanonicalPotential::value(const Point2& x) const {
  const auto values = edge_values(x);
  double u = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (values[k] > 0.0) u += values[k] * std::log(values[k]) / polytope_.weights()[k];
  return u;
}

Jet CanonicalPotential::jet(const Point2& x) const {
  const auto values = edge_values(x);
  const auto& ell = polytope_.defining_functions();
  Jet j;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double w = polytope_.weights()[k];
    const Vec2 m = ell[k].gradient();
    const double l = values[k];
    if (l > 0.0) {
      j.value += l * std::log(l) / w;
      j.gradient = j.gradient + m * ((std::log(l) + 1.0) / w);
      j.hessian = j.hessian + Sym2{m.x1 * m.x1, m.x1 * m.x2, m.x2 * m.x2} * (1.0 / (w * l));
    } else {
      // On edge k: the normal derivative diverges, tangential terms are unaffected.
      j.gradient = j.gradient + Vec2{m.x1 == 0.0 ? 0.0 : -m.x1 * kInf,
                                     m.x2 == 0.0 ? 0.0 : -m.x2 * kInf};
      const auto blow = [](double c) { return c == 0.0 ? 0.0 : (c > 0.0 ? kInf : -kInf); };
      j.hessian = j.hessian + Sym2{blow(m.x1 * m.x1), blow(m.x1 * m.x2), blow(m.x2 * m.x2)};
    }
  }
  return j;
}

double CanonicalPotential::second_along(const Point2& x, const Vec2& d) const {
  const auto values = edge_values(x);
  const auto& ell = polytope_.defining_functions();
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double md = dot(ell[k].gradient(), d);
    if (md == 0.0) continue;
    if (values[k] == 0.0) return kInf;
    s += md * md / (polytope_.weights()[k] * values[k]);
  }
  return s;
}

Jet canonical_potential(const Polytope& polytope, const Point2& x) {
  return CanonicalPotential(polytope).jet(x);
}

HessianData hessian_data(const Jet& jet) {
  HessianData d;
  d.u = jet.hessian;
  d.xi = jet.gradient;
  if (!std::isfinite(d.u.a11) || !std::isfinite(d.u.a12) || !std::isfinite(d.u.a22) ||
      !d.u.positive_definite())
    throw Error(ErrorKind::NotPositiveDefinite, "Hessian is not positive definite");
  d.J = d.u.det();
  d.inverse = d.u.inverse();
  return d;
}

namespace {

/// Inverse Hessians on the 3x3 stencil, indexed [i + 1][j + 1] for offset (i h, j h).
struct InverseStencil {
  Sym2 w[3][3];
};

InverseStencil inverse_stencil(const Potential& u, const Point2& x, double h) {
  InverseStencil s;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      s.w[i + 1][j + 1] = hessian_data(u.jet(x + Point2{i * h, j * h})).inverse;
  return s;
}

double abreu_order4(const Potential& u, const Point2& x, double h) {
  Sym2 w[5][5];
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      w[i + 2][j + 2] = hessian_data(u.jet(x + Point2{i * h, j * h})).inverse;
  constexpr double d2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};  // / 12 h^2
  constexpr double d1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};      // / 12 h
  double s11 = 0.0, s22 = 0.0, s12 = 0.0;
  for (int k = 0; k < 5; ++k) {
    s11 += d2[k] * w[k][2].a11;
    s22 += d2[k] * w[2][k].a22;
    for (int l = 0; l < 5; ++l) s12 += d1[k] * d1[l] * w[k][l].a12;
  }
  return (s11 + s22) / (12.0 * h * h) + 2.0 * s12 / (144.0 * h * h);
}

}  // namespace

double abreu_at(const Potential& u, const Point2& x, double h, int order) {
  if (order == 4) return abreu_order4(u, x, h);
  if (order != 2) throw Error(ErrorKind::InvalidArgument, "difference order must be 2 or 4");
  const InverseStencil s = inverse_stencil(u, x, h);
  const double d11 = (s.w[2][1].a11 - 2.0 * s.w[1][1].a11 + s.w[0][1].a11) / (h * h);
  const double d22 = (s.w[1][2].a22 - 2.0 * s.w[1][1].a22 + s.w[1][0].a22) / (h * h);
  const double d12 =
      (s.w[2][2].a12 - s.w[2][0].a12 - s.w[0][2].a12 + s.w[0][0].a12) / (4.0 * h * h);
  return d11 + 2.0 * d12 + d22;
}

Vec2 vector_field_at(const Potential& u, const Point2& x, double h) {
  const InverseStencil s = inverse_stencil(u, x, h);
  const double d1_11 = (s.w[2][1].a11 - s.w[0][1].a11) / (2.0 * h);
  const double d2_12 = (s.w[1][2].a12 - s.w[1][0].a12) / (2.0 * h);
  const double d1_12 = (s.w[2][1].a12 - s.w[0][1].a12) / (2.0 * h);
  const double d2_22 = (s.w[1][2].a22 - s.w[1][0].a22) / (2.0 * h);
  return {-(d1_11 + d2_12), -(d1_12 + d2_22)};
}

}  // namespace toric
