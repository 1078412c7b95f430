#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "toric/analytic.hpp"

using namespace toric;

namespace {

// Hessian of a potential by central differences of the value, step h.
Sym2 fd_hessian(const Potential& u, const Point2& x, double h) {
  const auto v = [&](double a, double b) { return u.value({x.x1 + a, x.x2 + b}); };
  const double c = v(0, 0);
  return {(v(h, 0) - 2 * c + v(-h, 0)) / (h * h),
          (v(h, h) - v(h, -h) - v(-h, h) + v(-h, -h)) / (4 * h * h),
          (v(0, h) - 2 * c + v(0, -h)) / (h * h)};
}

}  // namespace

TEST_CASE("model potentials solve their Abreu equations") {
  const FlatModel flat;
  const ShearModel shear(2.0);
  const SquareProduct sq;
  for (const Point2 x : {Point2{0.3, 0.4}, Point2{1.2, 0.7}, Point2{0.05, 2.0}}) {
    CHECK(std::abs(abreu_at(flat, x, 1e-3, 4)) < 1e-6);
    CHECK(std::abs(abreu_at(shear, x, 1e-3, 4)) < 1e-6);
  }
  for (const Point2 x : {Point2{0.3, 0.4}, Point2{-0.5, 0.1}, Point2{0.8, -0.8}})
    CHECK(abreu_at(sq, x, 1e-3, 4) == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(std::abs(abreu_at(QuadraticModel{}, {3, -4}, 1e-2)) < 1e-9);
}

TEST_CASE("model jets agree with finite differences of the value") {
  const ShearModel shear(0.5);
  const Point2 x{0.7, 0.2};
  const Jet j = shear.jet(x);
  const Sym2 H = fd_hessian(shear, x, 1e-4);
  CHECK(j.hessian.a11 == doctest::Approx(H.a11).epsilon(1e-5));
  CHECK(j.hessian.a12 == doctest::Approx(H.a12).epsilon(1e-5));
  CHECK(j.hessian.a22 == doctest::Approx(H.a22).epsilon(1e-5));
  const Jet m = model_potential(ModelName::shear, x, 0.5);
  CHECK(m.value == doctest::Approx(j.value));
  CHECK(square_factor(0.0) == 0.0);
  CHECK(square_factor(1.0) == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(FlatModel{}.value({0.0, 1.0}) == 0.0);
}

TEST_CASE("F_pm branches") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-50.0, 50.0), R(0.0, 10.0);
  for (int k = 0; k < 200; ++k) {
    const double H = U(rng), r = R(rng);
    const FPair f = F_pm(H, r);
    CHECK(f.plus * f.minus == doctest::Approx(r * r / 4.0).epsilon(1e-12));
    CHECK(f.plus - f.minus == doctest::Approx(H).epsilon(1e-12));
    CHECK(f.plus >= 0.0);
    CHECK(f.minus >= 0.0);
  }
  CHECK_THROWS_AS(F_pm(0.0, 0.0), Error);
}

TEST_CASE("axisymmetric harmonic checker on known fields") {
  const AxiSymField log_plus{[](double r, double H) { return std::log(F_pm(H, r).plus); },
                             [](double r, double H) { return 2.0 * F_pm(H, r).minus; }};
  const AxiSymResidual ok = check_axisym_harmonic(log_plus, {});
  CHECK(ok.harmonic < 1e-5);
  CHECK(ok.conjugate < 1e-5);
  CHECK(ok.first_order < 1e-6);
  const AxiSymField not_harmonic{[](double r, double H) { return r * r + H; }, nullptr};
  CHECK(check_axisym_harmonic(not_harmonic, {}).harmonic == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("property: Joyce map round trip and closed-form inverse on a dense grid") {
  for (const JoyceParams p : {JoyceParams{1, 1}, JoyceParams{1, 2}, JoyceParams{3, 0.5}}) {
    double round_trip = 0.0, closed = 0.0;
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) {
        const Point2 y{10.0 * i / 49.0, 10.0 * j / 49.0};
        const Point2 x = joyce_map(p, y);
        const Point2 back = joyce_inverse(p, x);
        round_trip = std::max(round_trip, norm(back - y));
        closed = std::max(closed, norm(joyce_inverse_closed(p, x) - back));
      }
    CHECK(round_trip < 1e-10);
    CHECK(closed < 1e-9);
  }
  // The naive inverse does not invert the map.
  const JoyceParams p{1.0, 2.0};
  const Point2 x = joyce_map(p, {1.0, 1.0});
  CHECK(norm(joyce_inverse_naive(p, x) - Point2{1.0, 1.0}) > 1e-3);
}

TEST_CASE("property: Joyce potential is convex on the quadrant") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(1e-3, 10.0);
  for (const JoyceParams p : {JoyceParams{1, 1}, JoyceParams{1, 2}, JoyceParams{3, 0.5}}) {
    const JoycePotential u(p);
    int bad = 0;
    for (int k = 0; k < 10000; ++k)
      if (!u.jet({U(rng), U(rng)}).hessian.positive_definite()) ++bad;
    CHECK(bad == 0);
  }
}

TEST_CASE("Joyce potential has Guillemin behaviour along the axes") {
  // g = u - x1 log x1 - x2 log x2 and its gradient have finite limits at axis points.
  for (const JoyceParams p : {JoyceParams{1, 2}, JoyceParams{3, 0.5}}) {
    for (double a : {0.5, 1.0, 3.0, 7.0, 9.5}) {
      for (int axis = 0; axis < 2; ++axis) {
        double g_prev = 0.0, d_prev = 0.0;
        for (int k = 4; k <= 12; k += 2) {
          const double s = std::pow(10.0, -k);
          const Point2 x = axis == 0 ? Point2{a, s} : Point2{s, a};
          const JoyceValue v = joyce_potential(p, x);
          const double g = v.u - x.x1 * std::log(x.x1) - x.x2 * std::log(x.x2);
          const double d1 = v.xi.x1 - std::log(x.x1) - 1.0, d2 = v.xi.x2 - std::log(x.x2) - 1.0;
          CHECK(std::abs(d1) < 100.0);
          CHECK(std::abs(d2) < 100.0);
          const double d_normal = axis == 0 ? d2 : d1;
          if (k > 4) {
            // Lipschitz in the distance to the axis, with the derivative bound above.
            const double s_prev = 100.0 * s;
            CHECK(std::abs(g - g_prev) < 100.0 * s_prev);
            CHECK(std::abs(d_normal - d_prev) < 1e3 * s_prev);
          }
          g_prev = g;
          d_prev = d_normal;
        }
      }
    }
  }
}

TEST_CASE("Joyce potential asymptotics") {
  for (const JoyceParams p : {JoyceParams{1, 1}, JoyceParams{1, 2}, JoyceParams{3, 0.5}}) {
    // sigma = a2 x1 - a1 x2, tau = a2 x1 + a1 x2.
    const auto at = [&](double sigma, double tau) {
      return Point2{(tau + sigma) / (2.0 * p.a2), (tau - sigma) / (2.0 * p.a1)};
    };
    double lo = 1e300, hi = 0.0;
    for (double tau : {1e2, 1e3, 1e4, 1e5, 1e6}) {
      const double ratio = joyce_potential(p, at(0.0, tau)).u / (tau * std::log(tau));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 2.0);
    // For sigma > 0.2 tau the leading term is a2 y1^2 / 2 with a2 y1 ~ sigma.
    const double tau = 1e4;
    for (double sigma : {0.25 * tau, 0.5 * tau, 0.9 * tau}) {
      const double u = joyce_potential(p, at(sigma, tau)).u;
      CHECK(std::abs(u / (sigma * sigma / (2.0 * p.a2)) - 1.0) < 0.02);
    }
  }
}

TEST_CASE("Joyce potential gradient and Abreu residual") {
  for (const JoyceParams p : {JoyceParams{1, 1}, JoyceParams{1, 2}, JoyceParams{3, 0.5}}) {
    const JoycePotential u(p);
    for (const Point2 x : {Point2{0.5, 0.5}, Point2{2.0, 4.5}, Point2{5.0, 0.7}}) {
      const double h = 1e-5;
      const double g1 = (u.value({x.x1 + h, x.x2}) - u.value({x.x1 - h, x.x2})) / (2 * h);
      const double g2 = (u.value({x.x1, x.x2 + h}) - u.value({x.x1, x.x2 - h})) / (2 * h);
      const JoyceValue v = joyce_potential(p, x);
      CHECK(v.xi.x1 == doctest::Approx(g1).epsilon(1e-7));
      CHECK(v.xi.x2 == doctest::Approx(g2).epsilon(1e-7));
      CHECK(std::abs(abreu_at(u, x, 1e-3, 4)) < 1e-6);
      CHECK(u.jet(x).hessian.positive_definite());
    }
  }
}

TEST_CASE("Taub-NUT sum of Legendre coordinates") {
  const JoyceParams p{1.0, 1.0};
  for (const Point2 x : {Point2{0.5, 0.5}, Point2{1.0, 3.0}, Point2{4.0, 2.0}}) {
    const JoyceValue v = joyce_potential(p, x);
    const double r = joyce_r(p, x);
    // With a1 = a2 the quadratic terms cancel in xi1 + xi2 = log(y1 y2) + 2.
    CHECK(v.xi.x1 + v.xi.x2 == doctest::Approx(2.0 * std::log(r / 2.0) + 2.0).epsilon(1e-12));
  }
}

TEST_CASE("1D family is C2 across the blend and integrates to the closed form") {
  const OneDFamily fam(0.1);
  for (double t : {0.5, 0.75, -0.5, -0.75}) {
    const double d = 1e-9;
    CHECK(fam.f(t - d) == doctest::Approx(fam.f(t + d)).epsilon(1e-7));
    CHECK(fam.f_prime(t - d) == doctest::Approx(fam.f_prime(t + d)).epsilon(1e-6));
    CHECK(std::abs(fam.f_second(t - d) - fam.f_second(t + d)) < 1e-5);
  }
  for (double x : {-0.9, -0.6, 0.0, 0.3, 0.7}) {
    const double h = 1e-4;
    using N = OneDFamily::Normalization;
    const double second = (fam.dU(x + h, N::at_0) - fam.dU(x - h, N::at_0)) / (2 * h);
    CHECK(second == doctest::Approx(1.0 / fam.f(x)).epsilon(1e-6));
    const double first = (fam.U(x + h, N::at_0) - fam.U(x - h, N::at_0)) / (2 * h);
    CHECK(first == doctest::Approx(fam.dU(x, N::at_0)).epsilon(1e-6));
  }
  CHECK(fam.n_eps() == doctest::Approx(fam.n_eps_closed_form()).epsilon(1e-12));
  CHECK_THROWS_AS(OneDFamily(0.0), Error);
  CHECK_THROWS_AS(fam.f(1.5), Error);
}
