#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "toric/analytic.hpp"
#include "toric/solver.hpp"

using namespace toric;
using namespace toric::testing;

namespace {

Eigen::VectorXd bump(const Grid& g, double amp) {
  Eigen::VectorXd f(static_cast<Eigen::Index>(g.closed_nodes().size()));
  for (std::size_t k = 0; k < g.closed_nodes().size(); ++k) {
    const Point2 x = g.node(g.closed_nodes()[k]).x;
    f[static_cast<Eigen::Index>(k)] =
        amp * (std::sin(std::numbers::pi * x.x1 + 0.3) * std::cos(2 * x.x2) + 0.5 * std::cos(1.7 * x.x1 * x.x2));
  }
  return f;
}

double max_mod_affine(const Grid& g, Eigen::VectorXd f) {
  const Eigen::MatrixXd Q = affine_basis(g);
  f -= Q * (Q.transpose() * f);
  return f.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("Newton recovers the square solution from a perturbed start") {
  const Polytope sq = unit_square_pm1();
  SolverConfig c;
  c.N = 16;
  const Grid g(sq, c.N);
  const SolverResult r = minimize_M(sq, c, bump(g, 0.05));
  CHECK(r.status == SolverStatus::converged);
  CHECK(r.iterations > 0);
  CHECK(r.gradient_norm < c.g_tol);
  CHECK(max_mod_affine(g, r.potential->f()) < 1e-6);
  CHECK(r.max_residual < 1e-4);
  for (std::size_t k = 1; k < r.M_history.size(); ++k) CHECK(r.M_history[k] < r.M_history[k - 1]);
}

TEST_CASE("gradient descent decreases monotonically") {
  const Polytope sq = unit_square_pm1();
  SolverConfig c;
  c.N = 16;
  c.method = SolverMethod::gradient_descent;
  c.max_iters = 40;
  const Grid g(sq, c.N);
  const SolverResult r = minimize_M(sq, c, bump(g, 0.05));
  REQUIRE(r.M_history.size() > 1);
  for (std::size_t k = 1; k < r.M_history.size(); ++k) CHECK(r.M_history[k] < r.M_history[k - 1]);
  CHECK(r.M_history.back() < r.M_history.front());
}

TEST_CASE("solver preconditions") {
  SolverConfig c;
  c.N = 16;
  CHECK_THROWS_AS(minimize_M(weighted_hexagon(), c), Error);
  const Polytope futaki = build_polytope({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, {10, 1, 1, 1}, std::nullopt);
  try {
    minimize_M(futaki, c);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FutakiGate);
  }
  const Grid g(unit_square_pm1(), c.N);
  Eigen::VectorXd concave(static_cast<Eigen::Index>(g.closed_nodes().size()));
  for (std::size_t k = 0; k < g.closed_nodes().size(); ++k)
    concave[static_cast<Eigen::Index>(k)] = -10.0 * std::pow(g.node(g.closed_nodes()[k]).x.x2, 2);
  try {
    minimize_M(unit_square_pm1(), c, concave);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfeasibleStart);
  }
  c.N = 1;
  CHECK_THROWS_AS(minimize_M(unit_square_pm1(), c), Error);
}

TEST_CASE("triangle solve stays near the canonical solution") {
  // u0 solves the continuum problem; the discrete minimizer differs by O(h) from corner stencil defects.
  std::vector<double> res;
  for (int N : {16, 32}) {
    SolverConfig c;
    c.N = N;
    const SolverResult r = minimize_M(triangle01(), c);
    CHECK(r.status == SolverStatus::converged);
    CHECK(r.potential->f().cwiseAbs().maxCoeff() < 0.1 / N);
    const ResidualReport rep = residual_report(r);
    REQUIRE(rep.identity_slack.has_value());
    CHECK(*rep.identity_slack < 5e-3 * 0.5);
    res.push_back(r.max_residual);
  }
  CHECK(res[1] < 0.6 * res[0]);
  CHECK(res[1] < 0.01);
}

TEST_CASE("residual report and affine normalization") {
  const Polytope sq = unit_square_pm1();
  SolverConfig c;
  c.N = 16;
  c.max_iters = 0;
  const Grid g(sq, c.N);
  const SolverResult r = minimize_M(sq, c, bump(g, 0.05));
  CHECK(r.status == SolverStatus::max_iters);
  const ResidualReport rep = residual_report(r);
  CHECK_FALSE(rep.identity_slack.has_value());
  CHECK_FALSE(rep.note.empty());

  const PotentialField n = affine_normalize(*r.potential, {0.2, -0.1});
  CHECK(std::abs(n.value({0.2, -0.1})) < 1e-12);
  CHECK(norm(n.jet({0.2, -0.1}).gradient) < 1e-12);
  CHECK(n.jet({0.5, 0.5}).hessian.a11 == doctest::Approx(r.potential->jet({0.5, 0.5}).hessian.a11));
  CHECK_THROWS_AS(affine_normalize(*r.potential, {1.0, 0.0}), Error);
}

TEST_CASE("gauge invariance under affine changes of the start") {
  const Polytope sq = unit_square_pm1();
  SolverConfig c;
  c.N = 16;
  const Grid g(sq, c.N);
  const Eigen::VectorXd f0 = bump(g, 0.05);
  Eigen::VectorXd f1 = f0;
  for (std::size_t k = 0; k < g.closed_nodes().size(); ++k) {
    const Point2 x = g.node(g.closed_nodes()[k]).x;
    f1[static_cast<Eigen::Index>(k)] += 0.7 - 1.3 * x.x1 + 0.4 * x.x2;
  }
  const PotentialField a = affine_normalize(*minimize_M(sq, c, f0).potential, {0.1, 0.2});
  const PotentialField b = affine_normalize(*minimize_M(sq, c, f1).potential, {0.1, 0.2});
  CHECK((a.values_at_nodes() - b.values_at_nodes()).cwiseAbs().maxCoeff() < 1e-8);
}
