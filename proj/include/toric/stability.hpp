#pragma once

#include <array>
#include <string>
#include <vector>

#include "toric/geometry.hpp"

namespace toric {

/// L_{A,sigma} f = int_{dP} f dsigma - int_P A f dmu, for polynomial f.
double evaluate_L_poly(const Polytope& polytope, const Polynomial& f);

struct FutakiData {
  double A = 0.0;
  /// L on {1, x1, x2} with the mass-matched A.
  std::array<double, 3> residual{};
};

FutakiData determine_A_and_futaki(const Polytope& polytope);

/// Tolerance below which the moment residual counts as vanishing:
/// 1e-9 * sigma(dP) * diameter.
double futaki_tolerance(const Polytope& polytope);
bool futaki_ok(const Polytope& polytope);

/// int_{dP} lambda^+ dsigma. Only the boundary of P is integrated, not the crease.
double boundary_mass_hinge(const Polytope& polytope, const AffineFunction& lambda);

/// L_{A,sigma}(lambda^+) using the polytope's A. Throws ZeroHinge when
/// P intersected with {lambda > 0} has zero area.
double evaluate_L_hinge(const Polytope& polytope, const AffineFunction& lambda);

enum class HingeNormalization { boundary_mass_one, raw };

struct HingeFunction {
  AffineFunction lambda;
  HingeNormalization normalization = HingeNormalization::raw;
  double theta = 0.0;   // crease normal angle
  double offset = 0.0;  // crease offset c in n.x = c before normalization
};

/// Crease lambda = n(theta).x - c scaled so that int_{dP} lambda^+ dsigma = 1.
HingeFunction normalized_hinge(const Polytope& polytope, double theta, double offset);

enum class StabilityStatus { stable, destabilized, inconclusive };
const char* to_string(StabilityStatus s);

struct ScanConfig {
  int angles = 720;
  int offsets = 256;
  int refine_candidates = 16;
  double refine_tolerance = 1e-6;  // relative to the polygon diameter
  int threads = 1;
  bool keep_grid = false;
};

struct ScanSample {
  double theta = 0.0;
  double offset = 0.0;
  double L = 0.0;
};

struct StabilityReport {
  double A_used = 0.0;
  std::array<double, 3> futaki_residual{};
  double min_L = 0.0;
  HingeFunction argmin_lambda;
  StabilityStatus status = StabilityStatus::inconclusive;
  double C_estimate = 0.0;
  /// Base point p0 (centroid) at which every scanned hinge vanishes.
  Point2 base_point;
  std::string note;
  std::vector<ScanSample> grid;
};

/// Scans L over boundary-mass-normalized hinges whose crease leaves the
/// centroid on the zero side, then refines the smallest values by coordinate
/// descent. Hinge positivity is taken as the full stability criterion.
StabilityReport scan_positivity(const Polytope& polytope, const ScanConfig& config = {});

/// sup over scanned hinges of int_{dP} lambda^+ dsigma / L(lambda^+) = 1 / min_L.
/// A lower bound for the constant over all normalized convex functions.
double stability_constant_estimate(const Polytope& polytope, const StabilityReport& report);

}  // namespace toric
