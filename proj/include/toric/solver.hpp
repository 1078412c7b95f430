#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toric/field.hpp"

namespace toric {

enum class SolverMethod { newton, gradient_descent };
enum class SolverStatus { converged, max_iters, infeasible_start };
const char* to_string(SolverStatus s);

struct SolverConfig {
  int N = 64;
  double g_tol = 1e-9;  // on max |P grad|, P removing affine directions
  int max_iters = 200;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
  SolverMethod method = SolverMethod::newton;
  int threads = 1;
  int collar_cells = 2;
};

struct SolverResult {
  std::optional<PotentialField> potential;
  /// Discrete objective after each accepted step; entry 0 is the start.
  std::vector<double> M_history;
  std::vector<ResidualSample> residual_field;
  double max_residual = 0.0;
  double gradient_norm = 0.0;  // final max |P grad|
  int iterations = 0;
  SolverStatus status = SolverStatus::max_iters;
  std::string note;
};

/// Orthonormal basis of the affine functions {1, x1, x2} restricted to the
/// closed nodes, as the columns of an n x 3 matrix.
Eigen::MatrixXd affine_basis(const Grid& grid);

/// Minimizes the discrete functional over f modulo affine functions.
/// Throws NotDelzant, FutakiGate, or InfeasibleStart.
SolverResult minimize_M(const Polytope& polytope, const SolverConfig& config,
                        const std::optional<Eigen::VectorXd>& initial_f = std::nullopt);

struct ResidualReport {
  double max_residual = 0.0;
  /// |L(u) - 2 Area(P)|, from the quadrature of L_quadrature.
  std::optional<double> identity_slack;
  double L_value = 0.0;
  double max_V = 0.0;
  std::string note;
};

ResidualReport residual_report(const SolverResult& result);

/// Subtracts the supporting affine function at p0, so that u(p0) = 0 and
/// grad u(p0) = 0. Throws OutsidePolygon unless p0 is interior.
PotentialField affine_normalize(const PotentialField& field, const Point2& p0);

}  // namespace toric
