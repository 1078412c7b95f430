#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "toric/functional.hpp"
#include "toric/grid.hpp"
#include "toric/potential.hpp"

namespace toric {

/// u = u0 + f + affine, with f given at the closed-polygon nodes and
/// extended between nodes by Catmull-Rom bicubic interpolation. Immutable.
class PotentialField final : public Potential {
 public:
  /// f is indexed like grid->closed_nodes().
  PotentialField(const Polytope& polytope, std::shared_ptr<const Grid> grid, Eigen::VectorXd f,
                 AffineFunction affine = {});

  Jet jet(const Point2& x) const override;
  double value(const Point2& x) const override;
  double second_along(const Point2& x, const Vec2& d) const override;
  double domain_distance(const Point2& x) const override;

  const Polytope& polytope() const { return canonical_.polytope(); }
  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const CanonicalPotential& canonical() const { return canonical_; }
  /// Correction at the closed nodes, without the affine part.
  const Eigen::VectorXd& f() const { return f_; }
  const AffineFunction& affine() const { return affine_; }
  /// f + affine at the closed nodes.
  Eigen::VectorXd correction_at_nodes() const;
  /// u0 + f + affine at the closed nodes.
  Eigen::VectorXd values_at_nodes() const;

  PotentialField with_affine(AffineFunction affine) const;

  /// Bicubic jet of f + affine alone.
  Jet correction_jet(const Point2& x) const;

  /// Hybrid derivatives at a Hessian node: analytic u0 plus stencil
  /// differences of f. Throws NotPositiveDefinite.
  HessianData eval_derivatives(int node) const;

  /// Nodes carrying an Abreu residual: non-collar Hessian nodes whose eight
  /// neighbours are Hessian nodes.
  const std::vector<int>& residual_nodes() const { return residual_nodes_; }
  bool has_residual(int node) const;

  /// sum_ij d^2 u^{ij} / dx_i dx_j by centered differences of the node-wise
  /// inverse Hessians.
  double abreu_operator(int node) const;
  /// V^i = -sum_j d u^{ij} / dx_j.
  Vec2 vector_field_V(int node) const;

 private:
  double f_node(int i, int j) const { return ext_[static_cast<std::size_t>(grid_->index(i, j))]; }
  Sym2 inverse_at(int i, int j) const;

  CanonicalPotential canonical_;
  std::shared_ptr<const Grid> grid_;
  Eigen::VectorXd f_;
  AffineFunction affine_;
  std::vector<double> ext_;  // f over every lattice node, extended outside P
  std::vector<int> residual_nodes_;
};

struct ResidualSample {
  int node = 0;
  Point2 x;
  double residual = 0.0;  // abreu_operator + A
  Vec2 V;
};

/// Residuals at every residual node, in lattice order.
std::vector<ResidualSample> abreu_residual_field(const PotentialField& field);

/// Composite value of M: the discrete barrier relative to its value at f = 0,
/// plus a cell-averaged quadrature of -log J(u0), plus L_h(u).
double mabuchi_M(const PotentialField& field, const DiscreteFunctional& functional);

/// int_P u dmu and the weighted boundary integral int_dP u dsigma by
/// cell-wise Gauss quadrature and adaptive edge quadrature.
struct LQuadrature {
  double interior = 0.0;
  double boundary = 0.0;
  double L = 0.0;  // boundary - A * interior
};
LQuadrature L_quadrature(const PotentialField& field);

/// Abreu residual computed from node values alone: all derivatives by
/// differences. Max of |abreu + A| over nodes at distance >= min_distance
/// from dP. Independent of the hybrid evaluation.
double abreu_pure_grid(const Grid& grid, const Eigen::VectorXd& u_nodes, double A,
                       double min_distance);

/// CSV rows (x1, x2, u, xi1, xi2, J, abreu_residual) over Hessian nodes;
/// the residual column is nan where no residual stencil exists.
void write_potential_csv(std::ostream& out, const PotentialField& field);

}  // namespace toric
