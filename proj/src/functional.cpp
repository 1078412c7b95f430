#include "toric/functional.hpp"

#include <cmath>
#include <thread>

namespace toric {

namespace {

/// General 2x2 product of symmetric matrices, row-major.
struct Mat2 {
  double m11, m12, m21, m22;
};

Mat2 product(const Sym2& a, const Sym2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a12, a.a11 * b.a12 + a.a12 * b.a22,
          a.a12 * b.a11 + a.a22 * b.a12, a.a12 * b.a12 + a.a22 * b.a22};
}

double trace_of_product(const Mat2& a, const Mat2& b) {
  return a.m11 * b.m11 + a.m12 * b.m21 + a.m21 * b.m12 + a.m22 * b.m22;
}

}  // namespace

Eigen::VectorXd boundary_weights(const Polytope& polytope, const Grid& grid) {
  const auto& edges = polytope.polygon().edges();
  const auto& verts = polytope.polygon().vertices();
  std::vector<double> step_measure(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto e = grid.edge_step(static_cast<int>(k));
    const double steps = std::round(edges[k].length / (std::hypot(e[0], e[1]) * grid.h()));
    step_measure[k] = polytope.weights()[k] * edges[k].measure_length / steps;
  }
  const std::size_t nv = verts.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.closed_nodes().size()));
  for (Eigen::Index u = 0; u < w.size(); ++u) {
    const GridNode& node = grid.node(grid.closed_nodes()[static_cast<std::size_t>(u)]);
    if (node.cls == NodeClass::boundary) {
      w[u] = step_measure[static_cast<std::size_t>(node.edge)];
    } else if (node.cls == NodeClass::vertex) {
      for (std::size_t v = 0; v < nv; ++v)
        if (norm(verts[v] - node.x) <= 1e-9 * grid.h())
          w[u] = 0.5 * (step_measure[v] + step_measure[(v + nv - 1) % nv]);
    }
  }
  return w;
}

DiscreteFunctional::DiscreteFunctional(const Polytope& polytope, std::shared_ptr<const Grid> grid,
                                       int threads)
    : polytope_(polytope), grid_(std::move(grid)), threads_(std::max(1, threads)) {
  const Grid& g = *grid_;
  const CanonicalPotential canonical(polytope_);
  const auto n = static_cast<Eigen::Index>(g.closed_nodes().size());
  u0_.resize(n);
  logdet_of_node_.assign(g.nodes().size(), -1);

  linear_ = boundary_weights(polytope_, g);

  for (Eigen::Index u = 0; u < n; ++u) {
    const int k = g.closed_nodes()[static_cast<std::size_t>(u)];
    const GridNode& node = g.node(k);
    u0_[u] = canonical.value(node.x);
    linear_[u] -= polytope_.A() * node.alpha;

    if (node.cls == NodeClass::boundary) {
      const int e = node.edge;
      const auto st = g.edge_step(e);
      const double len = std::hypot(st[0], st[1]);
      TangentTerm t;
      t.node = k;
      t.alpha = node.alpha;
      t.t0 = canonical.second_along(node.x, Vec2{st[0] / len, st[1] / len});
      t.unknowns = {g.unknown(g.index(node.i - st[0], node.j - st[1])), static_cast<int>(u),
                    g.unknown(g.index(node.i + st[0], node.j + st[1]))};
      t.c = 1.0 / (len * len * g.h() * g.h());
      tangent_.push_back(t);
    } else if (g.is_hessian_node(node.i, node.j)) {
      LogDetTerm t;
      t.node = k;
      t.alpha = node.alpha;
      t.H0 = canonical.jet(node.x).hessian;
      for (const auto& s : hessian_stencil(g, node.i, node.j)) {
        t.unknowns.push_back(g.unknown(s.node));
        t.coef.push_back(s.coef);
      }
      logdet_of_node_[static_cast<std::size_t>(k)] = static_cast<int>(logdet_.size());
      logdet_.push_back(std::move(t));
    }
  }
}

Sym2 DiscreteFunctional::hessian_of(const LogDetTerm& t, const Eigen::VectorXd& f) const {
  Sym2 H = t.H0;
  for (std::size_t a = 0; a < t.unknowns.size(); ++a) H = H + t.coef[a] * f[t.unknowns[a]];
  return H;
}

double DiscreteFunctional::tangent_of(const TangentTerm& t, const Eigen::VectorXd& f) const {
  return t.t0 + t.c * (f[t.unknowns[0]] - 2.0 * f[t.unknowns[1]] + f[t.unknowns[2]]);
}

std::optional<double> DiscreteFunctional::barrier(const Eigen::VectorXd& f,
                                                  Eigen::VectorXd* grad) const {
  const std::size_t nl = logdet_.size(), nt = tangent_.size();
  const std::size_t total = nl + nt;
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads_),
                                                             std::max<std::size_t>(total, 1)));
  std::vector<double> partial(static_cast<std::size_t>(workers), 0.0);
  std::vector<char> ok(static_cast<std::size_t>(workers), 1);
  std::vector<Eigen::VectorXd> grads;
  if (grad) grads.assign(static_cast<std::size_t>(workers), Eigen::VectorXd::Zero(size()));

  auto work = [&](int w) {
    const std::size_t begin = total * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
    const std::size_t end = total * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
    double s = 0.0;
    Eigen::VectorXd* g = grad ? &grads[static_cast<std::size_t>(w)] : nullptr;
    for (std::size_t q = begin; q < end; ++q) {
      if (q < nl) {
        const LogDetTerm& t = logdet_[q];
        const Sym2 H = hessian_of(t, f);
        if (!H.positive_definite()) {
          ok[static_cast<std::size_t>(w)] = 0;
          return;
        }
        s -= t.alpha * std::log(H.det());
        if (g) {
          const Sym2 inv = H.inverse();
          for (std::size_t a = 0; a < t.unknowns.size(); ++a)
            (*g)[t.unknowns[a]] -= t.alpha * trace_product(inv, t.coef[a]);
        }
      } else {
        const TangentTerm& t = tangent_[q - nl];
        const double T = tangent_of(t, f);
        if (!(T > 0.0)) {
          ok[static_cast<std::size_t>(w)] = 0;
          return;
        }
        s -= t.alpha * std::log(T);
        if (g) {
          const double d = t.alpha * t.c / T;
          (*g)[t.unknowns[0]] -= d;
          (*g)[t.unknowns[1]] += 2.0 * d;
          (*g)[t.unknowns[2]] -= d;
        }
      }
    }
    partial[static_cast<std::size_t>(w)] = s;
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  double value = 0.0;
  for (int w = 0; w < workers; ++w) {
    if (!ok[static_cast<std::size_t>(w)]) return std::nullopt;
    value += partial[static_cast<std::size_t>(w)];
  }
  if (grad)
    for (int w = 0; w < workers; ++w) *grad += grads[static_cast<std::size_t>(w)];
  return value;
}

std::optional<double> DiscreteFunctional::value(const Eigen::VectorXd& f) const {
  const auto b = barrier(f, nullptr);
  if (!b) return std::nullopt;
  return *b + linear_.dot(u0_ + f);
}

double DiscreteFunctional::value_gradient(const Eigen::VectorXd& f, Eigen::VectorXd& grad) const {
  grad = linear_;
  const auto b = barrier(f, &grad);
  if (!b) throw Error(ErrorKind::NotPositiveDefinite, "discrete Hessian lost positivity");
  return *b + linear_.dot(u0_ + f);
}

Eigen::SparseMatrix<double> DiscreteFunctional::hessian(const Eigen::VectorXd& f) const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(logdet_.size() * 81 + tangent_.size() * 9);
  for (const auto& t : logdet_) {
    const Sym2 H = hessian_of(t, f);
    if (!H.positive_definite())
      throw Error(ErrorKind::NotPositiveDefinite, "discrete Hessian lost positivity");
    const Sym2 inv = H.inverse();
    std::vector<Mat2> M;
    M.reserve(t.coef.size());
    for (const auto& c : t.coef) M.push_back(product(inv, c));
    for (std::size_t a = 0; a < M.size(); ++a)
      for (std::size_t b = 0; b < M.size(); ++b)
        trip.emplace_back(t.unknowns[a], t.unknowns[b], t.alpha * trace_of_product(M[a], M[b]));
  }
  for (const auto& t : tangent_) {
    const double T = tangent_of(t, f);
    if (!(T > 0.0)) throw Error(ErrorKind::NotPositiveDefinite, "tangential term lost positivity");
    const double c[3] = {t.c, -2.0 * t.c, t.c};
    const double s = t.alpha / (T * T);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trip.emplace_back(t.unknowns[a], t.unknowns[b], s * c[a] * c[b]);
  }
  Eigen::SparseMatrix<double> H(size(), size());
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

}  // namespace toric
