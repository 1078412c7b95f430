#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "toric/geometry.hpp"
#include "toric/polynomial.hpp"

using namespace toric;
using toric::testing::McEstimate;
using toric::testing::mc_integrate;
using toric::testing::random_convex_polygon;

namespace {

// Tensor Gauss-Legendre on [-1,1]^2 (5 points), exact up to degree 9 per variable.
double gauss_square(const Polynomial& p) {
  const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                       0.9061798459386640};
  const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                       0.2369268850561891, 0.2369268850561891};
  double s = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) s += w[i] * w[j] * p({x[i], x[j]});
  return s;
}

// Fan triangulation with the 3-point edge-midpoint rule per triangle: exact for degree 2.
double fan_midpoint(const std::vector<Point2>& v, const Polynomial& p) {
  double s = 0.0;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const Point2 a = v[0], b = v[k], c = v[k + 1];
    const double area = 0.5 * cross(b - a, c - a);
    s += area / 3.0 * (p((a + b) * 0.5) + p((b + c) * 0.5) + p((c + a) * 0.5));
  }
  return s;
}

Polynomial random_polynomial(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Polynomial p(degree);
  for (int d = 0; d <= degree; ++d)
    for (int j = 0; j <= d; ++j) p.set_coeff(d - j, j, U(rng));
  return p;
}

}  // namespace

TEST_CASE("polygon basics on the square") {
  const Polygon P({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(P.area() == doctest::Approx(4.0));
  CHECK(P.centroid().x1 == doctest::Approx(0.0));
  CHECK(P.diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(P.signed_distance({0.5, 0.0}) == doctest::Approx(0.5));
  CHECK(P.signed_distance({2.0, 0.0}) == doctest::Approx(-1.0));
  for (const auto& e : P.edges()) CHECK(e.length == doctest::Approx(2.0));
}

TEST_CASE("construction errors") {
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind([] { Polygon({{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}}); }) == ErrorKind::NonConvex);
  CHECK(kind([] { Polygon({{0, 0}, {0, 1}, {1, 0}}); }) == ErrorKind::NonConvex);
  CHECK(kind([] { Polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}); }) == ErrorKind::DegenerateEdge);
  CHECK(kind([] { build_polytope({{0, 0}, {1, 0}, {0, 1}}, {1, 0, 1}, std::nullopt); }) ==
        ErrorKind::NonPositiveWeight);
}

TEST_CASE("mass-matched A and lattice lengths") {
  const Polytope sq = toric::testing::unit_square_pm1();
  CHECK(sq.A() == doctest::Approx(2.0));
  CHECK(sq.boundary_mass() == doctest::Approx(8.0));
  const Polytope tri = toric::testing::triangle01();
  // Hypotenuse has lattice length 1, not sqrt 2.
  CHECK(tri.polygon().edges()[1].measure_length == doctest::Approx(1.0));
  CHECK(tri.A() == doctest::Approx(6.0));
  const Polytope us = build_polytope({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {2, 1, 1, 1}, std::nullopt);
  CHECK(us.A() == doctest::Approx(5.0));
}

TEST_CASE("defining functions vanish on their edge and are positive inside") {
  const Polytope tri = toric::testing::triangle01();
  const auto& E = tri.polygon().edges();
  for (std::size_t k = 0; k < E.size(); ++k) {
    const AffineFunction l = tri.defining_functions()[k];
    CHECK(l(E[k].a) == doctest::Approx(0.0));
    CHECK(l(E[k].b) == doctest::Approx(0.0));
    CHECK(l({0.25, 0.25}) > 0.0);
  }
}

TEST_CASE("exact polynomial quadrature agrees with tensor Gauss on the square") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Polygon sq({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial p(6);
    for (int d = 0; d <= 6; ++d)
      for (int j = 0; j <= d; ++j) p.set_coeff(d - j, j, U(rng));
    CHECK(integrate_region_poly(sq, p) == doctest::Approx(gauss_square(p)).epsilon(1e-12));
  }
}

TEST_CASE("property: region quadrature of quadratics matches fan midpoint rule") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_convex_polygon(rng);
    const Polynomial p = random_polynomial(rng, 2);
    CHECK(integrate_region_poly(std::span<const Point2>(v), p) ==
          doctest::Approx(fan_midpoint(v, p)).epsilon(1e-10));
    CHECK(integrate_region_poly(std::span<const Point2>(v), Polynomial::constant(1.0)) ==
          doctest::Approx(polygon_area(v)).epsilon(1e-12));
  }
}

TEST_CASE("property: region quadrature matches Monte-Carlo on random polygons") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> D(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const Polygon P(random_convex_polygon(rng));
    CHECK(integrate_region_poly(P, Polynomial::constant(1.0)) > 0.0);
    const Polynomial p = random_polynomial(rng, D(rng));
    const McEstimate mc = mc_integrate(P, [&](const Point2& x) { return p(x); }, 1000000, rng);
    CHECK(std::abs(integrate_region_poly(P, p) - mc.value) < 4.0 * mc.stderr_ + 1e-12);
  }
}

TEST_CASE("property: affine equivariance of region quadrature") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_convex_polygon(rng);
    const double m11 = U(rng), m12 = U(rng), m21 = U(rng), m22 = U(rng);
    const double det = m11 * m22 - m12 * m21;
    if (std::abs(det) < 0.1) continue;
    const AffineFunction T1{m11, m12, U(rng)}, T2{m21, m22, U(rng)};
    std::vector<Point2> w;
    for (const auto& x : v) w.push_back({T1(x), T2(x)});
    if (det < 0.0) std::reverse(w.begin(), w.end());
    const Polynomial p = random_polynomial(rng, 4);
    const double lhs = integrate_region_poly(std::span<const Point2>(w), p);
    const double rhs = std::abs(det) * integrate_region_poly(std::span<const Point2>(v), p.compose(T1, T2));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("property: clip areas of complementary half-planes add up") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0), T(0.0, 6.283185307179586);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_convex_polygon(rng);
    const double th = T(rng);
    const AffineFunction l{std::cos(th), std::sin(th), 0.5 * U(rng)};
    const auto plus = clip_halfplane(std::span<const Point2>(v), l);
    const auto minus = clip_halfplane(std::span<const Point2>(v), -l);
    CHECK(polygon_area(plus) + polygon_area(minus) == doctest::Approx(polygon_area(v)).epsilon(1e-12));
    for (const auto& p : plus) CHECK(l(p) >= -1e-12);
  }
}

TEST_CASE("segment quadrature of x1^2 along a unit segment") {
  const double v = integrate_segment_poly({0, 0}, {1, 0}, Polynomial::monomial(2, 0));
  CHECK(v == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rational normals and the Delzant condition") {
  const auto n = rational_normal(Vec2{3.0, 4.0} * 0.2);
  REQUIRE(n.has_value());
  CHECK(n->p == 3);
  CHECK(n->q == 4);
  // Slope 1/3 + 1e-8: 1/3 misses by 1e-8 and the next convergent needs a denominator above 1e6.
  const double r = 1.0 / 3.0 + 1e-8;
  CHECK_FALSE(rational_normal(Vec2{1.0, r} / std::hypot(1.0, r)).has_value());

  CHECK(is_delzant(toric::testing::unit_square_pm1()).delzant);
  CHECK(is_delzant(toric::testing::triangle01()).delzant);
  const DelzantReport hex = is_delzant(toric::testing::weighted_hexagon());
  CHECK_FALSE(hex.delzant);
  CHECK(std::abs(hex.vertex_determinants[0]) == 2);
  // Weighted projective plane P(1,1,2) is not smooth at (0, 2).
  CHECK_FALSE(is_delzant(build_polytope({{0, 0}, {1, 0}, {0, 2}}, {1, 1, 1}, std::nullopt)).delzant);
}
