#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "toric/geometry.hpp"

namespace toric::testing {

inline Polytope unit_square_pm1(std::optional<double> A = std::nullopt) {
  return build_polytope({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, {1, 1, 1, 1}, A);
}

inline Polytope triangle01() { return build_polytope({{0, 0}, {1, 0}, {0, 1}}, {1, 1, 1}, std::nullopt); }

/// Weighted hexagon whose vertical crease x1 = 0 destabilizes.
inline Polytope weighted_hexagon(double slant_weight = 0.1) {
  const double w = slant_weight;
  return build_polytope({{2, 0}, {1, 1}, {-1, 1}, {-2, 0}, {-1, -1}, {1, -1}}, {w, 1, w, w, 1, w},
                        std::nullopt);
}

/// Convex hull (Andrew's monotone chain), counter-clockwise, no collinear points.
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point2& a, const Point2& b) { return a.x1 < b.x1 || (a.x1 == b.x1 && a.x2 < b.x2); });
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

/// Random convex polygon: hull of uniform points in a disc, retried until it
/// has at least `min_vertices` vertices and no short edges.
inline std::vector<Point2> random_convex_polygon(std::mt19937_64& rng, int points = 12,
                                                 std::size_t min_vertices = 4) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (;;) {
    std::vector<Point2> pts;
    while (static_cast<int>(pts.size()) < points) {
      const Point2 p{U(rng), U(rng)};
      if (dot(p, p) <= 1.0) pts.push_back(p * 2.0);
    }
    auto h = convex_hull(pts);
    bool ok = h.size() >= min_vertices;
    for (std::size_t i = 0; ok && i < h.size(); ++i) {
      const Point2 a = h[i], b = h[(i + 1) % h.size()], c = h[(i + 2) % h.size()];
      ok = norm(b - a) > 0.05 && cross(b - a, c - b) > 1e-3;
    }
    if (ok) return h;
  }
}

/// Monte-Carlo mean of g over uniform samples in the bounding box of a convex
/// polygon, with g = 0 outside. Returns the integral estimate and its standard error.
struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

template <class G>
McEstimate mc_integrate(const Polygon& P, G g, long samples, std::mt19937_64& rng) {
  double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
  for (const auto& v : P.vertices()) {
    lo1 = std::min(lo1, v.x1), hi1 = std::max(hi1, v.x1);
    lo2 = std::min(lo2, v.x2), hi2 = std::max(hi2, v.x2);
  }
  std::uniform_real_distribution<double> U1(lo1, hi1), U2(lo2, hi2);
  const double box = (hi1 - lo1) * (hi2 - lo2);
  double s = 0.0, s2 = 0.0;
  for (long k = 0; k < samples; ++k) {
    const Point2 x{U1(rng), U2(rng)};
    const double v = P.contains(x) ? box * g(x) : 0.0;
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = s / n;
  return {mean, std::sqrt(std::max(0.0, s2 / n - mean * mean) / n)};
}

/// Independent hinge oracle: Monte-Carlo interior term, composite Simpson on
/// each edge for the boundary term. Returns L estimate and standard error.
inline McEstimate mc_L_hinge(const Polytope& P, const AffineFunction& lambda, long samples,
                             std::mt19937_64& rng, int simpson_panels = 20000) {
  const auto pos = [&](const Point2& x) { return std::max(0.0, lambda(x)); };
  const McEstimate inner = mc_integrate(P.polygon(), pos, samples, rng);
  double boundary = 0.0;
  const auto& E = P.polygon().edges();
  for (std::size_t k = 0; k < E.size(); ++k) {
    const int n = simpson_panels;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * pos(E[k].a + (E[k].b - E[k].a) * t);
    }
    boundary += P.weights()[k] * E[k].measure_length * s / (3.0 * n);
  }
  return {boundary - P.A() * inner.value, P.A() * inner.stderr_};
}

}  // namespace toric::testing
