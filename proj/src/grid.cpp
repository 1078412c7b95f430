#include "toric/grid.hpp"

#include <cmath>
#include <numeric>

namespace toric {

namespace {

long long lattice_coord(double v, double origin, int N) {
  const double s = (v - origin) * N;
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9 * std::max(1.0, std::abs(s)))
    throw Error(ErrorKind::GridMisaligned,
                "vertex coordinate " + std::to_string(v) + " is not on the grid of spacing 1/" +
                    std::to_string(N));
  return static_cast<long long>(r);
}

}  // namespace

Grid::Grid(const Polytope& polytope, int N, int collar_cells)
    : N_(N), h_(1.0 / N), collar_cells_(collar_cells) {
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "grid size must be at least 2");
  const auto& verts = polytope.polygon().vertices();
  Point2 lo = verts.front(), hi = verts.front();
  for (const auto& v : verts) {
    lo = {std::min(lo.x1, v.x1), std::min(lo.x2, v.x2)};
    hi = {std::max(hi.x1, v.x1), std::max(hi.x2, v.x2)};
  }
  // Integer lattice coordinates of the vertices relative to the box corner.
  std::vector<std::array<long long, 2>> vl;
  for (const auto& v : verts) vl.push_back({lattice_coord(v.x1, lo.x1, N), lattice_coord(v.x2, lo.x2, N)});
  const long long wx = lattice_coord(hi.x1, lo.x1, N), wy = lattice_coord(hi.x2, lo.x2, N);

  nx_ = static_cast<int>(wx) + 1 + 2 * kPad;
  ny_ = static_cast<int>(wy) + 1 + 2 * kPad;
  origin_ = {lo.x1 - kPad * h_, lo.x2 - kPad * h_};

  const std::size_t nv = verts.size();
  for (std::size_t k = 0; k < nv; ++k) {
    const auto& a = vl[k];
    const auto& b = vl[(k + 1) % nv];
    const long long dx = b[0] - a[0], dy = b[1] - a[1];
    const long long g = std::gcd(std::llabs(dx), std::llabs(dy));
    edge_steps_.push_back({static_cast<int>(dx / g), static_cast<int>(dy / g)});
  }

  nodes_.resize(static_cast<std::size_t>(nx_) * ny_);
  unknown_of_node_.assign(nodes_.size(), -1);
  const Polygon& poly = polytope.polygon();
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      GridNode& n = nodes_[static_cast<std::size_t>(index(i, j))];
      n.i = i;
      n.j = j;
      n.x = {origin_.x1 + i * h_, origin_.x2 + j * h_};
      n.distance = poly.signed_distance(n.x);
      const long long pi = i - kPad, pj = j - kPad;
      bool all_left = true;
      int on_edge = -1;
      bool is_vertex = false;
      for (std::size_t k = 0; k < nv; ++k) {
        const auto& a = vl[k];
        const auto& b = vl[(k + 1) % nv];
        if (pi == a[0] && pj == a[1]) is_vertex = true;
        const long long ex = b[0] - a[0], ey = b[1] - a[1];
        const long long rx = pi - a[0], ry = pj - a[1];
        const long long c = ex * ry - ey * rx;
        if (c < 0) all_left = false;
        if (c == 0) {
          const long long d = ex * rx + ey * ry;
          if (d > 0 && d < ex * ex + ey * ey) on_edge = static_cast<int>(k);
          else all_left = false;  // on the edge line, beyond the segment
        }
      }
      if (is_vertex) {
        n.cls = NodeClass::vertex;
      } else if (on_edge >= 0 && all_left) {
        n.cls = NodeClass::boundary;
        n.edge = on_edge;
      } else if (all_left && on_edge < 0) {
        n.cls = NodeClass::inside;
      }
    }

  const auto& ell = polytope.defining_functions();
  for (auto& n : nodes_) {
    if (n.cls == NodeClass::outside) continue;
    std::vector<Point2> cell{{n.x.x1 - 0.5 * h_, n.x.x2 - 0.5 * h_},
                             {n.x.x1 + 0.5 * h_, n.x.x2 - 0.5 * h_},
                             {n.x.x1 + 0.5 * h_, n.x.x2 + 0.5 * h_},
                             {n.x.x1 - 0.5 * h_, n.x.x2 + 0.5 * h_}};
    for (const auto& l : ell) {
      cell = clip_halfplane(cell, l);
      if (cell.empty()) break;
    }
    n.alpha = polygon_area(cell);
    if (n.cls == NodeClass::inside) n.collar = n.distance <= collar_cells_ * h_;
  }

  // One mixed stencil on every Hessian node when the polygon admits it: mixing
  // stencils breaks discrete summation by parts wherever u^{12} varies.
  bool all_full = true, all_main = true, all_anti = true;
  std::vector<std::array<bool, 3>> avail(nodes_.size(), {false, false, false});
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    GridNode& n = nodes_[k];
    const int i = n.i, j = n.j;
    if (n.cls != NodeClass::inside || !in_closure(i + 1, j) || !in_closure(i - 1, j) ||
        !in_closure(i, j + 1) || !in_closure(i, j - 1))
      continue;
    const bool pp = in_closure(i + 1, j + 1), mm = in_closure(i - 1, j - 1);
    const bool pm = in_closure(i + 1, j - 1), mp = in_closure(i - 1, j + 1);
    avail[k] = {pp && mm && pm && mp, pp && mm, pm && mp};
    all_full = all_full && avail[k][0];
    all_main = all_main && avail[k][1];
    all_anti = all_anti && avail[k][2];
    n.mixed = MixedStencil::none;
  }
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const auto& a = avail[k];
    if (!(a[0] || a[1] || a[2])) continue;
    GridNode& n = nodes_[k];
    if (all_full) n.mixed = MixedStencil::full;
    else if (all_main) n.mixed = MixedStencil::main_diagonal;
    else if (all_anti) n.mixed = MixedStencil::anti_diagonal;
    else if (a[0]) n.mixed = MixedStencil::full;
    else if (a[1]) n.mixed = MixedStencil::main_diagonal;
    else n.mixed = MixedStencil::anti_diagonal;
  }

  for (std::size_t k = 0; k < nodes_.size(); ++k)
    if (nodes_[k].cls != NodeClass::outside) {
      unknown_of_node_[k] = static_cast<int>(closed_.size());
      closed_.push_back(static_cast<int>(k));
    }
}

std::array<int, 2> Grid::nearest(const Point2& x) const {
  return {static_cast<int>(std::lround((x.x1 - origin_.x1) / h_)),
          static_cast<int>(std::lround((x.x2 - origin_.x2) / h_))};
}

std::vector<StencilEntry> hessian_stencil(const Grid& grid, int i, int j) {
  if (!grid.is_hessian_node(i, j))
    throw Error(ErrorKind::InvalidArgument, "node has no second-difference stencil");
  const double h2 = grid.h() * grid.h();
  std::vector<StencilEntry> out;
  const auto add = [&](int di, int dj, Sym2 c) {
    const int k = grid.index(i + di, j + dj);
    for (auto& e : out)
      if (e.node == k) {
        e.coef = e.coef + c;
        return;
      }
    out.push_back({k, c});
  };
  add(0, 0, {-2.0 / h2, 0.0, -2.0 / h2});
  add(1, 0, {1.0 / h2, 0.0, 0.0});
  add(-1, 0, {1.0 / h2, 0.0, 0.0});
  add(0, 1, {0.0, 0.0, 1.0 / h2});
  add(0, -1, {0.0, 0.0, 1.0 / h2});
  const auto mixed = [](double c) { return Sym2{0.0, c, 0.0}; };
  switch (grid.node(i, j).mixed) {
    case MixedStencil::full:
      add(1, 1, mixed(0.25 / h2));
      add(-1, -1, mixed(0.25 / h2));
      add(1, -1, mixed(-0.25 / h2));
      add(-1, 1, mixed(-0.25 / h2));
      break;
    case MixedStencil::main_diagonal:
      add(1, 1, mixed(0.5 / h2));
      add(-1, -1, mixed(0.5 / h2));
      add(1, 0, mixed(-0.5 / h2));
      add(-1, 0, mixed(-0.5 / h2));
      add(0, 1, mixed(-0.5 / h2));
      add(0, -1, mixed(-0.5 / h2));
      add(0, 0, mixed(1.0 / h2));
      break;
    case MixedStencil::anti_diagonal:
      add(1, -1, mixed(-0.5 / h2));
      add(-1, 1, mixed(-0.5 / h2));
      add(1, 0, mixed(0.5 / h2));
      add(-1, 0, mixed(0.5 / h2));
      add(0, 1, mixed(0.5 / h2));
      add(0, -1, mixed(0.5 / h2));
      add(0, 0, mixed(-1.0 / h2));
      break;
    case MixedStencil::none: break;
  }
  return out;
}

}  // namespace toric
