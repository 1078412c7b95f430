#pragma once

#include <array>
#include <vector>

#include "toric/geometry.hpp"

namespace toric {

enum class NodeClass { outside, inside, boundary, vertex };

/// Difference stencil for the mixed derivative at a Hessian node.
enum class MixedStencil { none, full, main_diagonal, anti_diagonal };

struct GridNode {
  int i = 0;
  int j = 0;
  Point2 x;
  NodeClass cls = NodeClass::outside;
  int edge = -1;          // edge index for boundary nodes
  double distance = 0.0;  // Euclidean signed distance to dP, positive inside
  double alpha = 0.0;     // area of the node's cell [x - h/2, x + h/2]^2 within P
  bool collar = false;    // inside node within collar_cells * h of dP
  MixedStencil mixed = MixedStencil::none;
};

/// Uniform node lattice of spacing h = 1 / N over the bounding box of P,
/// padded by two nodes on every side. Vertices must lie on nodes.
class Grid {
 public:
  static constexpr int kPad = 2;

  Grid(const Polytope& polytope, int N, int collar_cells = 2);

  int N() const { return N_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int collar_cells() const { return collar_cells_; }
  Point2 origin() const { return origin_; }

  bool valid(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  int index(int i, int j) const { return j * nx_ + i; }
  const GridNode& node(int i, int j) const { return nodes_[static_cast<std::size_t>(index(i, j))]; }
  const GridNode& node(int k) const { return nodes_[static_cast<std::size_t>(k)]; }
  const std::vector<GridNode>& nodes() const { return nodes_; }

  /// Node class, outside for indices off the lattice.
  NodeClass cls(int i, int j) const { return valid(i, j) ? node(i, j).cls : NodeClass::outside; }
  bool in_closure(int i, int j) const { return cls(i, j) != NodeClass::outside; }

  /// Nodes of the closed polygon, in lattice order; these carry unknowns.
  const std::vector<int>& closed_nodes() const { return closed_; }
  /// Position of a node in closed_nodes(), or -1.
  int unknown(int node_index) const { return unknown_of_node_[static_cast<std::size_t>(node_index)]; }

  /// Inside nodes with a full second-difference stencil in the closed polygon.
  bool is_hessian_node(int i, int j) const {
    return valid(i, j) && node(i, j).cls == NodeClass::inside &&
           node(i, j).mixed != MixedStencil::none;
  }

  /// Primitive lattice step along edge k, in units of h.
  std::array<int, 2> edge_step(int k) const { return edge_steps_[static_cast<std::size_t>(k)]; }

  /// Lattice indices of the node nearest to x.
  std::array<int, 2> nearest(const Point2& x) const;

 private:
  int N_;
  double h_;
  int collar_cells_;
  int nx_ = 0, ny_ = 0;
  Point2 origin_;
  std::vector<GridNode> nodes_;
  std::vector<int> closed_;
  std::vector<int> unknown_of_node_;
  std::vector<std::array<int, 2>> edge_steps_;
};

struct StencilEntry {
  int node = 0;  // grid node index
  Sym2 coef;     // contribution to D^2 f per unit of f(node)
};

/// Second-difference Hessian stencil at a Hessian node (at most 9 entries):
/// D^2 f = sum coef * f(node), exact on quadratics.
std::vector<StencilEntry> hessian_stencil(const Grid& grid, int i, int j);

}  // namespace toric
