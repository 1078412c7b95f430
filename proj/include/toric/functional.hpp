#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <vector>

#include "toric/grid.hpp"
#include "toric/potential.hpp"

namespace toric {

/// -alpha log det(H0 + D^2 f) at a Hessian node.
struct LogDetTerm {
  int node = 0;
  double alpha = 0.0;
  Sym2 H0;
  std::vector<int> unknowns;  // parallel to coef
  std::vector<Sym2> coef;
};

/// -alpha log(t0 + c (f(b - e) - 2 f(b) + f(b + e))) at a boundary node b,
/// with e the primitive edge step and c = 1 / (|e| h)^2. The divergent
/// normal factor of det u_ij does not depend on f and is left out.
struct TangentTerm {
  int node = 0;
  double alpha = 0.0;
  double t0 = 0.0;
  std::array<int, 3> unknowns{};
  double c = 0.0;
};

/// Trapezoid weights of int_dP g dsigma over the closed nodes: boundary
/// nodes carry one lattice step of their edge, vertices half of each
/// adjacent step. Zero at inside nodes.
Eigen::VectorXd boundary_weights(const Polytope& polytope, const Grid& grid);

/// Discrete functional M_h(f) = -sum alpha log det + L_h(u0 + f) over the
/// node values f of the closed polygon. Convex; affine f lie in the kernel of
/// its Hessian.
class DiscreteFunctional {
 public:
  DiscreteFunctional(const Polytope& polytope, std::shared_ptr<const Grid> grid, int threads = 1);

  Eigen::Index size() const { return static_cast<Eigen::Index>(grid_->closed_nodes().size()); }
  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const Polytope& polytope() const { return polytope_; }

  /// nullopt when some log argument is not positive.
  std::optional<double> value(const Eigen::VectorXd& f) const;
  /// Throws NotPositiveDefinite when infeasible.
  double value_gradient(const Eigen::VectorXd& f, Eigen::VectorXd& grad) const;
  Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& f) const;
  bool feasible(const Eigen::VectorXd& f) const { return value(f).has_value(); }

  /// Node weights of L_h: trapezoid boundary measure minus A alpha.
  const Eigen::VectorXd& linear_weights() const { return linear_; }
  /// L_h applied to node values over the closed nodes.
  double L(const Eigen::VectorXd& u) const { return linear_.dot(u); }
  /// Canonical potential at the closed nodes.
  const Eigen::VectorXd& u0() const { return u0_; }

  const std::vector<LogDetTerm>& logdet_terms() const { return logdet_; }
  const std::vector<TangentTerm>& tangent_terms() const { return tangent_; }
  /// Index into logdet_terms() for a grid node, or -1.
  int logdet_term_of(int node) const { return logdet_of_node_[static_cast<std::size_t>(node)]; }

  /// H0 + D^2 f for a log-det term.
  Sym2 hessian_of(const LogDetTerm& t, const Eigen::VectorXd& f) const;
  double tangent_of(const TangentTerm& t, const Eigen::VectorXd& f) const;

 private:
  /// Sum of log terms; accumulates the gradient when grad is non-null.
  std::optional<double> barrier(const Eigen::VectorXd& f, Eigen::VectorXd* grad) const;

  Polytope polytope_;
  std::shared_ptr<const Grid> grid_;
  int threads_;
  std::vector<LogDetTerm> logdet_;
  std::vector<TangentTerm> tangent_;
  std::vector<int> logdet_of_node_;
  Eigen::VectorXd linear_;
  Eigen::VectorXd u0_;
};

}  // namespace toric
