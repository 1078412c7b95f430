#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "toric/analytic.hpp"
#include "toric/diagnostics.hpp"
#include "toric/solver.hpp"

using namespace toric;
using namespace toric::testing;

TEST_CASE("D(p) on the edge models") {
  // The edge x1 = 0 traversed downward keeps the half-plane x1 > 0 on its left.
  const Point2 a{0, 100}, b{0, -100};
  const ShearModel flat(0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> S(0.01, 5.0), Y(-5.0, 5.0);
  for (int k = 0; k < 20; ++k) {
    const EdgeProbe pr = make_edge_probe(a, b, {S(rng), Y(rng)});
    CHECK(D_of_p(flat, pr) == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (double s : {0.5, 2.0, 10.0})
    CHECK(D_of_p(ShearModel(s), make_edge_probe(a, b, {1, 0})) == doctest::Approx(s * s + 1).epsilon(1e-12));
  CHECK_THROWS_AS(make_edge_probe(a, b, {-1, 0}), Error);
  CHECK_THROWS_AS(make_edge_probe({0, 1}, {0, -1}, {1, 5}), Error);
}

TEST_CASE("pair variation is monotone for convex potentials") {
  const SquareProduct u;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-0.9, 0.9);
  for (int k = 0; k < 100; ++k) {
    const Point2 p{U(rng), U(rng)}, q{U(rng), U(rng)};
    if (norm(q - p) < 1e-6) continue;
    CHECK(pair_variation(u, p, q) >= 0.0);
  }
  const MScanResult m = m_condition_scan(u, Polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}), {0.25, 1.0});
  CHECK(m.pairs > 0);
  CHECK(m.max_V > 0.0);
  CHECK(std::isfinite(m.max_V));
}

TEST_CASE("vertex profile of the flat model") {
  const FlatModel flat;
  for (double t : {0.1, 1.0, 10.0}) CHECK(E_of_t(flat, t) == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-12));
  VertexProfileConfig c;
  c.t = {0.1, 0.5};
  const VertexProfile p = vertex_profile(flat, c);
  REQUIRE(p.rows.size() == 2);
  // J = 1 / (x1 x2) peaks at the chord ends |x1 - x2| = t/10: t^2 / (0.95 t * 1.05 t).
  CHECK(p.rows[0].Delta == doctest::Approx(1.0 / (0.95 * 1.05)).epsilon(1e-10));
  // U(t) = 2 t log t has U' = 2 log t + 2, so delta_n = 2 log 2.
  for (double d : p.delta_n) CHECK(d == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("volume ratio is one on the flat model") {
  const VolumeRatio r = volume_bound_B(FlatModel{}, 1.0);
  CHECK(r.sup == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.inf == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sublevel identities on the shifted flat model") {
  auto flat = std::make_shared<const FlatModel>();
  const AffineShifted u(flat, {-2, -2, 0});
  SublevelConfig c;
  const double dh = 1e-4;
  for (double h : {-0.9, -0.4}) c.h.insert(c.h.end(), {h - dh, h, h + dh});
  const auto sl = sublevel_profile(u, c);
  REQUIRE(sl.size() == 6);
  for (std::size_t k = 0; k < sl.size(); k += 3) {
    const auto &lo = sl[k], &mid = sl[k + 1], &hi = sl[k + 2];
    // phi = x1 + x2 on this model, so Omega(h) is the triangle of legs -h.
    CHECK(mid.xi1 == doctest::Approx(-mid.h).epsilon(1e-10));
    CHECK(mid.area_omega == doctest::Approx(mid.h * mid.h / 2).epsilon(1e-10));
    CHECK((hi.G1 - lo.G1) / (2 * dh) == doctest::Approx(-mid.xi1 / 2).epsilon(1e-6));
    CHECK((hi.J - lo.J) / (2 * dh) == doctest::Approx(-mid.area_omega / 3).epsilon(1e-6));
  }
  SublevelConfig bad;
  bad.h = {1.0};
  CHECK_THROWS_AS(sublevel_profile(u, bad), Error);
}

TEST_CASE("Riemannian lengths") {
  // Flat edge model: u_22 = 2 along the edge, so the metric length is sqrt 2 per unit.
  CHECK(riemannian_length(ShearModel(0.0), {{0, 1}, {0, 3}}) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));
  CHECK(riemannian_length(QuadraticModel{}, {{0, 0}, {3, 4}, {3, 0}}) == doctest::Approx(9.0).epsilon(1e-12));
  // A segment into the edge: int_0^1 x^-1/2 dx = 2.
  CHECK(riemannian_length(ShearModel(0.0), {{1, 0}, {0, 0}}) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK_THROWS_AS(riemannian_length(ShearModel(0.0), {{1, 0}, {-1, 0}}), Error);
}

TEST_CASE("envelope inequality on the square solution") {
  const Polytope sq = unit_square_pm1();
  SolverConfig c;
  c.N = 16;
  const SolverResult r = minimize_M(sq, c);
  const EnvelopeCheck half = convex_envelope_check8(*r.potential, {{-1, -1}, {0, -1}, {0, 1}, {-1, 1}});
  CHECK(half.slack >= -1e-3 * 4.0);
  CHECK(half.max_envelope_excess <= 1e-9);
  const EnvelopeCheck full = convex_envelope_check8(*r.potential, sq.polygon().vertices());
  CHECK(std::abs(full.boundary_lhs) < 1e-9);
  CHECK(std::abs(full.rhs) < 1e-9);
  CHECK_THROWS_AS(convex_envelope_check8(*r.potential, {{5, 5}, {6, 5}, {6, 6}}), Error);
}

TEST_CASE("vertex chart of the square solution") {
  const Polytope sq = unit_square_pm1();
  SolverConfig c;
  c.N = 16;
  const SolverResult r = minimize_M(sq, c);
  const Charted ch = Charted::at_vertex(std::make_shared<PotentialField>(*r.potential), sq, 0);
  const VolumeRatio vr = volume_bound_B(ch, 0.5, 10);
  CHECK(vr.inf > 0.0);
  CHECK(vr.sup / vr.inf < 10.0);
  // Near the corner the product solution is the flat model plus a smooth part.
  CHECK(E_of_t(ch, 0.01) == doctest::Approx(4.0 * std::log(2.0)).epsilon(0.05));
}

TEST_CASE("property: D and V are nonnegative on a positive definite field") {
  const Polytope sq = unit_square_pm1();
  const auto g = std::make_shared<const Grid>(sq, 16);
  Eigen::VectorXd f(static_cast<Eigen::Index>(g->closed_nodes().size()));
  for (std::size_t k = 0; k < g->closed_nodes().size(); ++k) {
    const Point2 x = g->node(g->closed_nodes()[k]).x;
    f[static_cast<Eigen::Index>(k)] = 0.05 * std::sin(2.0 * x.x1 + 1.0) * std::cos(1.3 * x.x2);
  }
  const PotentialField u(sq, g, f);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-0.8, 0.8), S(0.05, 0.9);
  const auto& E = sq.polygon().edges();
  for (int k = 0; k < 100; ++k) {
    const auto& e = E[static_cast<std::size_t>(k) % E.size()];
    const Vec2 t = (e.b - e.a) * (1.0 / norm(e.b - e.a));
    const Vec2 inward{-t.x2, t.x1};
    const Point2 p = (e.a + e.b) * 0.5 + t * U(rng) + inward * S(rng);
    CHECK(D_of_p(u, make_edge_probe(e.a, e.b, p)) >= 0.0);
    const Point2 q{U(rng), U(rng)};
    if (norm(q - p) > 1e-6) CHECK(pair_variation(u, p, q) >= 0.0);
  }
}

TEST_CASE("property: vertex quantities are invariant under chart rescaling") {
  auto flat = std::make_shared<const FlatModel>();
  auto joyce = std::make_shared<const JoycePotential>(JoyceParams{1.0, 2.0});
  VertexProfileConfig c;
  c.t = {0.05, 0.2, 0.7};
  c.delta_n_max = 0;
  for (const std::shared_ptr<const Potential>& base : {std::shared_ptr<const Potential>(flat),
                                                       std::shared_ptr<const Potential>(joyce)}) {
    for (double s : {0.5, 3.0}) {
      // u_s(x) = u(s x) / s has E_s(t) = E(s t), and likewise for Delta and F_eps.
      const Rescaled us(base, s);
      VertexProfileConfig cs = c;
      for (double& t : cs.t) t *= s;
      const VertexProfile a = vertex_profile(us, c), b = vertex_profile(*base, cs);
      REQUIRE(a.rows.size() == b.rows.size());
      for (std::size_t k = 0; k < a.rows.size(); ++k) {
        CHECK(a.rows[k].E == doctest::Approx(b.rows[k].E).epsilon(1e-8));
        CHECK(a.rows[k].Delta == doctest::Approx(b.rows[k].Delta).epsilon(1e-8));
        CHECK(a.rows[k].F[0] == doctest::Approx(b.rows[k].F[0]).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("property: sublevel sets grow with the level") {
  auto flat = std::make_shared<const FlatModel>();
  const AffineShifted shifted(flat, {-2, -2, 0});
  const Polytope sq = unit_square_pm1();
  const Charted corner =
      Charted::at_vertex(std::make_shared<const CanonicalPotential>(sq), sq, 0);
  const double top = corner.value({0.0, 0.0});
  for (const Potential* u : {static_cast<const Potential*>(&shifted), static_cast<const Potential*>(&corner)}) {
    SublevelConfig c;
    const bool model = u == &shifted;
    // The corner chart of the square has edges of length 2 and phi = 2 log(2 - t) + 2 log 2 on them.
    if (!model) c.l1 = c.l2 = 0.75;
    const double hi = model ? -0.05 : top - 0.05, span = model ? 0.9 : 2.6;
    for (int k = 0; k < 12; ++k) c.h.push_back(hi - span * (11 - k) / 11.0);
    const auto sl = sublevel_profile(*u, c);
    for (std::size_t k = 1; k < sl.size(); ++k) {
      CHECK(sl[k].area_omega <= sl[k - 1].area_omega + 1e-12);
      CHECK(sl[k].G1 <= sl[k - 1].G1 + 1e-12);
      CHECK(sl[k].G2 <= sl[k - 1].G2 + 1e-12);
    }
  }
}
