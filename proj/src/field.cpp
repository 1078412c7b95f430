#include "toric/field.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace toric {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Catmull-Rom weights for offsets -1, 0, 1, 2 and their t-derivatives.
struct CubicWeights {
  double w[4], d1[4], d2[4];
};

CubicWeights catmull_rom(double t) {
  const double t2 = t * t, t3 = t2 * t;
  return {{0.5 * (-t + 2.0 * t2 - t3), 0.5 * (2.0 - 5.0 * t2 + 3.0 * t3),
           0.5 * (t + 4.0 * t2 - 3.0 * t3), 0.5 * (-t2 + t3)},
          {0.5 * (-1.0 + 4.0 * t - 3.0 * t2), 0.5 * (-10.0 * t + 9.0 * t2),
           0.5 * (1.0 + 8.0 * t - 9.0 * t2), 0.5 * (-2.0 * t + 3.0 * t2)},
          {0.5 * (4.0 - 6.0 * t), 0.5 * (-10.0 + 18.0 * t), 0.5 * (8.0 - 18.0 * t),
           0.5 * (-2.0 + 6.0 * t)}};
}

constexpr int kDirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};

/// Gauss points on a triangle by the collapsed (Duffy) square map.
template <class F>
double triangle_gauss(const Point2& a, const Point2& b, const Point2& c, F&& fn) {
  using Rule = boost::math::quadrature::gauss<double, 6>;
  const double area2 = std::abs(cross(b - a, c - a));
  if (area2 == 0.0) return 0.0;
  // Abscissae on [-1, 1] are stored for the non-negative half only.
  std::vector<std::pair<double, double>> pts;
  const auto& xs = Rule::abscissa();
  const auto& ws = Rule::weights();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    pts.emplace_back(0.5 * (1.0 + xs[k]), 0.5 * ws[k]);
    if (xs[k] != 0.0) pts.emplace_back(0.5 * (1.0 - xs[k]), 0.5 * ws[k]);
  }
  double s = 0.0;
  for (const auto& [u, wu] : pts)
    for (const auto& [v, wv] : pts) {
      const Point2 x = a + (b - a) * u + (c - b) * (u * v);
      s += wu * wv * u * fn(x);
    }
  return s * area2;
}

/// Integral over a convex polygon by fan triangles from its vertex centroid.
template <class F>
double polygon_gauss(const std::vector<Point2>& poly, F&& fn) {
  if (poly.size() < 3) return 0.0;
  Point2 c;
  for (const auto& p : poly) c = c + p;
  c = c / static_cast<double>(poly.size());
  double s = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k)
    s += triangle_gauss(c, poly[k], poly[(k + 1) % poly.size()], fn);
  return s;
}

std::vector<Point2> clip_to(const Polytope& polytope, std::vector<Point2> poly) {
  for (const auto& l : polytope.defining_functions()) {
    poly = clip_halfplane(poly, l);
    if (poly.empty()) break;
  }
  return poly;
}

}  // namespace

PotentialField::PotentialField(const Polytope& polytope, std::shared_ptr<const Grid> grid,
                               Eigen::VectorXd f, AffineFunction affine)
    : canonical_(polytope), grid_(std::move(grid)), f_(std::move(f)), affine_(affine) {
  const Grid& g = *grid_;
  if (f_.size() != static_cast<Eigen::Index>(g.closed_nodes().size()))
    throw Error(ErrorKind::InvalidArgument, "correction size does not match the grid");
  if (!f_.allFinite()) throw Error(ErrorKind::InvalidArgument, "correction must be finite");

  ext_.assign(g.nodes().size(), kNaN);
  for (std::size_t u = 0; u < g.closed_nodes().size(); ++u)
    ext_[static_cast<std::size_t>(g.closed_nodes()[u])] = f_[static_cast<Eigen::Index>(u)];

  // Layered extension: linear extrapolation along lattice directions where a
  // known pair exists, else the mean of known neighbours.
  const auto known = [&](int i, int j) {
    return g.valid(i, j) && !std::isnan(ext_[static_cast<std::size_t>(g.index(i, j))]);
  };
  for (;;) {
    std::vector<std::pair<int, double>> layer;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (known(i, j)) continue;
        double lin = 0.0, avg = 0.0;
        int nlin = 0, navg = 0;
        for (const auto& d : kDirs) {
          const int i1 = i + d[0], j1 = j + d[1];
          if (!known(i1, j1)) continue;
          const double f1 = f_node(i1, j1);
          avg += f1;
          ++navg;
          if (known(i1 + d[0], j1 + d[1])) {
            lin += 2.0 * f1 - f_node(i1 + d[0], j1 + d[1]);
            ++nlin;
          }
        }
        if (nlin > 0) layer.emplace_back(g.index(i, j), lin / nlin);
        else if (navg > 0) layer.emplace_back(g.index(i, j), avg / navg);
      }
    if (layer.empty()) break;
    for (const auto& [k, v] : layer) ext_[static_cast<std::size_t>(k)] = v;
  }

  for (int k : g.closed_nodes()) {
    const GridNode& n = g.node(k);
    if (n.cls != NodeClass::inside || n.collar || !g.is_hessian_node(n.i, n.j)) continue;
    bool ok = true;
    for (const auto& d : kDirs) ok = ok && g.is_hessian_node(n.i + d[0], n.j + d[1]);
    if (ok) residual_nodes_.push_back(k);
  }
}

double PotentialField::domain_distance(const Point2& x) const {
  return canonical_.domain_distance(x);
}

Jet PotentialField::correction_jet(const Point2& x) const {
  const Grid& g = *grid_;
  const double h = g.h();
  const double s1 = (x.x1 - g.origin().x1) / h, s2 = (x.x2 - g.origin().x2) / h;
  const int i0 = std::clamp(static_cast<int>(std::floor(s1)), 1, g.nx() - 3);
  const int j0 = std::clamp(static_cast<int>(std::floor(s2)), 1, g.ny() - 3);
  const CubicWeights a = catmull_rom(s1 - i0), b = catmull_rom(s2 - j0);
  Jet jet;
  for (int q = 0; q < 4; ++q)
    for (int p = 0; p < 4; ++p) {
      const double v = f_node(i0 - 1 + p, j0 - 1 + q);
      jet.value += a.w[p] * b.w[q] * v;
      jet.gradient.x1 += a.d1[p] * b.w[q] * v;
      jet.gradient.x2 += a.w[p] * b.d1[q] * v;
      jet.hessian.a11 += a.d2[p] * b.w[q] * v;
      jet.hessian.a12 += a.d1[p] * b.d1[q] * v;
      jet.hessian.a22 += a.w[p] * b.d2[q] * v;
    }
  jet.gradient = jet.gradient / h;
  jet.hessian = jet.hessian * (1.0 / (h * h));
  jet.value += affine_(x);
  jet.gradient = jet.gradient + affine_.gradient();
  return jet;
}

Jet PotentialField::jet(const Point2& x) const {
  Jet j = canonical_.jet(x);
  const Jet c = correction_jet(x);
  j.value += c.value;
  j.gradient = j.gradient + c.gradient;
  j.hessian = j.hessian + c.hessian;
  return j;
}

double PotentialField::value(const Point2& x) const {
  return canonical_.value(x) + correction_jet(x).value;
}

double PotentialField::second_along(const Point2& x, const Vec2& d) const {
  return canonical_.second_along(x, d) + correction_jet(x).hessian.quadratic_form(d);
}

Eigen::VectorXd PotentialField::correction_at_nodes() const {
  Eigen::VectorXd out = f_;
  for (Eigen::Index u = 0; u < out.size(); ++u)
    out[u] += affine_(grid_->node(grid_->closed_nodes()[static_cast<std::size_t>(u)]).x);
  return out;
}

Eigen::VectorXd PotentialField::values_at_nodes() const {
  Eigen::VectorXd out = correction_at_nodes();
  for (Eigen::Index u = 0; u < out.size(); ++u)
    out[u] += canonical_.value(grid_->node(grid_->closed_nodes()[static_cast<std::size_t>(u)]).x);
  return out;
}

PotentialField PotentialField::with_affine(AffineFunction affine) const {
  return PotentialField(polytope(), grid_, f_, affine);
}

HessianData PotentialField::eval_derivatives(int node) const {
  const Grid& g = *grid_;
  const GridNode& n = g.node(node);
  if (!g.is_hessian_node(n.i, n.j))
    throw Error(ErrorKind::InvalidArgument, "node has no second-difference stencil");
  Jet j = canonical_.jet(n.x);
  for (const auto& s : hessian_stencil(g, n.i, n.j))
    j.hessian = j.hessian + s.coef * ext_[static_cast<std::size_t>(s.node)];
  const double h = g.h();
  j.gradient = j.gradient + affine_.gradient() +
               Vec2{(f_node(n.i + 1, n.j) - f_node(n.i - 1, n.j)) / (2.0 * h),
                    (f_node(n.i, n.j + 1) - f_node(n.i, n.j - 1)) / (2.0 * h)};
  return hessian_data(j);
}

Sym2 PotentialField::inverse_at(int i, int j) const {
  return eval_derivatives(grid_->index(i, j)).inverse;
}

bool PotentialField::has_residual(int node) const {
  return std::binary_search(residual_nodes_.begin(), residual_nodes_.end(), node);
}

double PotentialField::abreu_operator(int node) const {
  if (!has_residual(node)) throw Error(ErrorKind::InvalidArgument, "node has no residual stencil");
  const GridNode& n = grid_->node(node);
  const int i = n.i, j = n.j;
  const double h2 = grid_->h() * grid_->h();
  const double d11 = (inverse_at(i + 1, j).a11 - 2.0 * inverse_at(i, j).a11 + inverse_at(i - 1, j).a11) / h2;
  const double d22 = (inverse_at(i, j + 1).a22 - 2.0 * inverse_at(i, j).a22 + inverse_at(i, j - 1).a22) / h2;
  const double d12 = (inverse_at(i + 1, j + 1).a12 - inverse_at(i + 1, j - 1).a12 -
                      inverse_at(i - 1, j + 1).a12 + inverse_at(i - 1, j - 1).a12) /
                     (4.0 * h2);
  return d11 + 2.0 * d12 + d22;
}

Vec2 PotentialField::vector_field_V(int node) const {
  if (!has_residual(node)) throw Error(ErrorKind::InvalidArgument, "node has no residual stencil");
  const GridNode& n = grid_->node(node);
  const int i = n.i, j = n.j;
  const double h2 = 2.0 * grid_->h();
  const Sym2 e = inverse_at(i + 1, j), w = inverse_at(i - 1, j);
  const Sym2 no = inverse_at(i, j + 1), so = inverse_at(i, j - 1);
  return {-((e.a11 - w.a11) / h2 + (no.a12 - so.a12) / h2),
          -((e.a12 - w.a12) / h2 + (no.a22 - so.a22) / h2)};
}

std::vector<ResidualSample> abreu_residual_field(const PotentialField& field) {
  std::vector<ResidualSample> out;
  out.reserve(field.residual_nodes().size());
  const double A = field.polytope().A();
  for (int k : field.residual_nodes())
    out.push_back({k, field.grid().node(k).x, field.abreu_operator(k) + A, field.vector_field_V(k)});
  return out;
}

double mabuchi_M(const PotentialField& field, const DiscreteFunctional& functional) {
  const Grid& g = field.grid();
  if (&g != &functional.grid())
    throw Error(ErrorKind::InvalidArgument, "field and functional use different grids");
  const double h = g.h();
  const auto log_J0 = [&](const Point2& x) {
    return std::log(field.canonical().jet(x).hessian.det());
  };
  double k_cells = 0.0;
  for (int k : g.closed_nodes()) {
    const Point2 x = g.node(k).x;
    const auto cell = clip_to(field.polytope(), {{x.x1 - 0.5 * h, x.x2 - 0.5 * h},
                                                 {x.x1 + 0.5 * h, x.x2 - 0.5 * h},
                                                 {x.x1 + 0.5 * h, x.x2 + 0.5 * h},
                                                 {x.x1 - 0.5 * h, x.x2 + 0.5 * h}});
    k_cells -= polygon_gauss(cell, log_J0);
  }
  double k_discrete = 0.0;
  for (const auto& t : functional.logdet_terms()) k_discrete += t.alpha * std::log(t.H0.det());
  for (const auto& t : functional.tangent_terms()) k_discrete += t.alpha * std::log(t.t0);

  const auto v = functional.value(field.f());
  if (!v) throw Error(ErrorKind::NotPositiveDefinite, "discrete Hessian is not positive definite");
  const Eigen::VectorXd affine = field.correction_at_nodes() - field.f();
  return k_cells + k_discrete + *v + functional.L(affine);
}

LQuadrature L_quadrature(const PotentialField& field) {
  const Grid& g = field.grid();
  const Polytope& P = field.polytope();
  const auto u = [&](const Point2& x) { return field.value(x); };
  LQuadrature q;
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const Point2 a = g.node(i, j).x, b = g.node(i + 1, j + 1).x;
      const auto cell = clip_to(P, {{a.x1, a.x2}, {b.x1, a.x2}, {b.x1, b.x2}, {a.x1, b.x2}});
      if (polygon_area(cell) <= 0.0) continue;
      q.interior += polygon_gauss(cell, u);
    }
  using boost::math::quadrature::gauss_kronrod;
  const auto& edges = P.polygon().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto st = g.edge_step(static_cast<int>(k));
    const double steps = std::round(edges[k].length / (std::hypot(st[0], st[1]) * g.h()));
    const auto n = static_cast<int>(steps);
    double s = 0.0;
    for (int m = 0; m < n; ++m) {
      const Point2 p0 = edges[k].a + edges[k].direction() * (static_cast<double>(m) / n);
      const Point2 p1 = edges[k].a + edges[k].direction() * (static_cast<double>(m + 1) / n);
      s += gauss_kronrod<double, 31>::integrate(
          [&](double t) { return u(p0 + (p1 - p0) * t); }, 0.0, 1.0, 8, 1e-13);
    }
    q.boundary += P.weights()[k] * edges[k].measure_length * s / n;
  }
  q.L = q.boundary - P.A() * q.interior;
  return q;
}

double abreu_pure_grid(const Grid& grid, const Eigen::VectorXd& u_nodes, double A,
                       double min_distance) {
  const double h = grid.h(), h2 = h * h;
  const auto val = [&](int i, int j) -> std::optional<double> {
    if (!grid.in_closure(i, j)) return std::nullopt;
    return u_nodes[grid.unknown(grid.index(i, j))];
  };
  const auto inverse = [&](int i, int j) -> std::optional<Sym2> {
    double v[3][3];
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b) {
        const auto x = val(i + a, j + b);
        if (!x) return std::nullopt;
        v[a + 1][b + 1] = *x;
      }
    const Sym2 H{(v[2][1] - 2.0 * v[1][1] + v[0][1]) / h2,
                 (v[2][2] - v[2][0] - v[0][2] + v[0][0]) / (4.0 * h2),
                 (v[1][2] - 2.0 * v[1][1] + v[1][0]) / h2};
    if (!H.positive_definite()) throw Error(ErrorKind::NotPositiveDefinite, "grid Hessian lost positivity");
    return H.inverse();
  };
  double worst = 0.0;
  for (int k : grid.closed_nodes()) {
    const GridNode& n = grid.node(k);
    if (n.cls != NodeClass::inside || n.distance < min_distance) continue;
    std::optional<Sym2> w[3][3];
    bool ok = true;
    for (int a = -1; a <= 1 && ok; ++a)
      for (int b = -1; b <= 1 && ok; ++b) {
        w[a + 1][b + 1] = inverse(n.i + a, n.j + b);
        ok = w[a + 1][b + 1].has_value();
      }
    if (!ok) continue;
    const double d11 = (w[2][1]->a11 - 2.0 * w[1][1]->a11 + w[0][1]->a11) / h2;
    const double d22 = (w[1][2]->a22 - 2.0 * w[1][1]->a22 + w[1][0]->a22) / h2;
    const double d12 = (w[2][2]->a12 - w[2][0]->a12 - w[0][2]->a12 + w[0][0]->a12) / (4.0 * h2);
    worst = std::max(worst, std::abs(d11 + 2.0 * d12 + d22 + A));
  }
  return worst;
}

void write_potential_csv(std::ostream& out, const PotentialField& field) {
  const Grid& g = field.grid();
  out << "x1,x2,u,xi1,xi2,J,abreu_residual\n" << std::setprecision(17);
  const double A = field.polytope().A();
  for (int k : g.closed_nodes()) {
    const GridNode& n = g.node(k);
    if (!g.is_hessian_node(n.i, n.j)) continue;
    const HessianData d = field.eval_derivatives(k);
    const double r = field.has_residual(k) ? field.abreu_operator(k) + A : kNaN;
    out << n.x.x1 << ',' << n.x.x2 << ',' << field.value(n.x) << ',' << d.xi.x1 << ','
        << d.xi.x2 << ',' << d.J << ',' << r << '\n';
  }
}

}  // namespace toric
