#include "toric/solver.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>

#include "toric/stability.hpp"

namespace toric {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::max_iters: return "max_iters";
    case SolverStatus::infeasible_start: return "infeasible_start";
  }
  return "unknown";
}

Eigen::MatrixXd affine_basis(const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.closed_nodes().size());
  Eigen::MatrixXd B(n, 3);
  for (Eigen::Index u = 0; u < n; ++u) {
    const Point2 x = grid.node(grid.closed_nodes()[static_cast<std::size_t>(u)]).x;
    B.row(u) << 1.0, x.x1, x.x2;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, 3);
}

namespace {

void project(const Eigen::MatrixXd& Q, Eigen::VectorXd& v) { v -= Q * (Q.transpose() * v); }

}  // namespace

SolverResult minimize_M(const Polytope& polytope, const SolverConfig& config,
                        const std::optional<Eigen::VectorXd>& initial_f) {
  if (config.N < 2 || !(config.g_tol > 0.0) || config.max_iters < 0 || !(config.shrink > 0.0) ||
      !(config.shrink < 1.0))
    throw Error(ErrorKind::InvalidArgument, "invalid solver configuration");
  const DelzantReport dz = is_delzant(polytope);
  if (!dz.delzant) throw Error(ErrorKind::NotDelzant, dz.message);
  if (!futaki_ok(polytope)) {
    const FutakiData fd = determine_A_and_futaki(polytope);
    throw Error(ErrorKind::FutakiGate,
                "moment residual (" + std::to_string(fd.residual[1]) + ", " +
                    std::to_string(fd.residual[2]) +
                    ") does not vanish; no constant-A solution exists");
  }

  auto grid = std::make_shared<const Grid>(polytope, config.N, config.collar_cells);
  const DiscreteFunctional F(polytope, grid, config.threads);
  const Eigen::MatrixXd Q = affine_basis(*grid);

  Eigen::VectorXd f = initial_f ? *initial_f : Eigen::VectorXd::Zero(F.size());
  if (f.size() != F.size())
    throw Error(ErrorKind::InvalidArgument, "initial correction size does not match the grid");
  project(Q, f);
  const auto start = F.value(f);
  if (!start)
    throw Error(ErrorKind::InfeasibleStart, "u0 + f0 is not positive definite on the grid");

  SolverResult result;
  double M = *start;
  result.M_history.push_back(M);
  Eigen::VectorXd g;
  for (;;) {
    F.value_gradient(f, g);
    project(Q, g);
    result.gradient_norm = g.cwiseAbs().maxCoeff();
    if (result.gradient_norm < config.g_tol) {
      result.status = SolverStatus::converged;
      break;
    }
    if (result.iterations >= config.max_iters) {
      result.status = SolverStatus::max_iters;
      break;
    }

    Eigen::VectorXd d = -g;
    if (config.method == SolverMethod::newton) {
      Eigen::SparseMatrix<double> H = F.hessian(f);
      double max_diag = 0.0;
      for (Eigen::Index k = 0; k < H.rows(); ++k) max_diag = std::max(max_diag, H.coeff(k, k));
      Eigen::SparseMatrix<double> I(H.rows(), H.cols());
      I.setIdentity();
      H += (1e-10 * max_diag) * I;
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
      if (ldlt.info() == Eigen::Success) {
        Eigen::VectorXd nd = ldlt.solve(-g);
        if (ldlt.info() == Eigen::Success && nd.allFinite()) d = nd;
      }
      project(Q, d);
    }
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      d = -g;
      slope = g.dot(d);
    }

    double t = 1.0;
    bool accepted = false;
    for (int b = 0; b < config.max_backtracks; ++b, t *= config.shrink) {
      Eigen::VectorXd trial = f + t * d;
      project(Q, trial);
      const auto v = F.value(trial);
      if (v && *v < M && *v <= M + config.sufficient_decrease * t * slope) {
        f = std::move(trial);
        M = *v;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // A predicted decrease below the round-off of M cannot be resolved by the line search.
      const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(M));
      if (-slope <= roundoff) {
        result.status = SolverStatus::converged;
        result.note = "predicted decrease below round-off of M; gradient tolerance not reached";
      } else {
        result.status = SolverStatus::max_iters;
        result.note = "line search found no decrease";
      }
      break;
    }
    ++result.iterations;
    result.M_history.push_back(M);
  }

  result.potential.emplace(polytope, grid, f);
  result.residual_field = abreu_residual_field(*result.potential);
  for (const auto& s : result.residual_field)
    result.max_residual = std::max(result.max_residual, std::abs(s.residual));
  return result;
}

ResidualReport residual_report(const SolverResult& result) {
  ResidualReport r;
  r.max_residual = result.max_residual;
  for (const auto& s : result.residual_field) r.max_V = std::max(r.max_V, norm(s.V));
  if (!result.potential) {
    r.note = "no potential";
    return r;
  }
  const LQuadrature q = L_quadrature(*result.potential);
  r.L_value = q.L;
  if (result.status == SolverStatus::converged)
    r.identity_slack = std::abs(q.L - 2.0 * result.potential->polytope().polygon().area());
  else
    r.note = "identity L(u) = 2 Area(P) holds only for a solution; run did not converge";
  return r;
}

PotentialField affine_normalize(const PotentialField& field, const Point2& p0) {
  if (!(field.domain_distance(p0) > 0.0))
    throw Error(ErrorKind::OutsidePolygon, "normalization point must be interior");
  const Jet j = field.jet(p0);
  const AffineFunction& a = field.affine();
  const AffineFunction support{j.gradient.x1, j.gradient.x2,
                               j.value - j.gradient.x1 * p0.x1 - j.gradient.x2 * p0.x2};
  return field.with_affine({a.a1 - support.a1, a.a2 - support.a2, a.b - support.b});
}

}  // namespace toric
