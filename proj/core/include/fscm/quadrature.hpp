#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fscm/geometry.hpp"

namespace fscm {

struct QuadraturePoint {
  Point2 point;
  double weight = 0.0;
};

/// Gauss-Legendre rule on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [0, 1] (cached, thread-safe).
const GaussRule& gauss_legendre(int m);

/// Rule on the reference triangle (0,0),(1,0),(0,1); weights sum to 1/2.
struct ReferenceRule {
  std::vector<std::array<double, 3>> points;  // (xi, eta, weight)
};

/// Symmetric 6-point rule, exact for polynomials of degree 4.
const ReferenceRule& triangle_rule_order4();

/// Append the physical points of `rule` mapped onto `tri`.
void map_rule(const ReferenceRule& rule, const std::array<Point2, 3>& tri, std::vector<QuadraturePoint>& out);

/// Settings for integrals that blow up like rho^{-sigma} at the reentrant corner.
struct GradedOptions {
  /// Number of dyadic rings in the radial Duffy coordinate.
  int levels = 12;
  /// Radial Gauss order on each ring.
  int ring_order = 8;
  /// Radial Gauss order of the innermost cell; the transverse order is max(ring_order, core_order).
  int core_order = 12;
  /// Radial substitution u = t^q in the innermost cell; q = 3 turns
  /// rho^{-4/3}, rho^{-2/3} and rho^{-1/3} (times the Jacobian) into polynomials.
  int radial_power = 3;
  /// Declared exponent sigma of the rho^{-sigma} behaviour; must be < 2.
  double singularity_order = 4.0 / 3.0;
};

/// Quadrature points for a triangle whose first vertex is the singular point.
/// Throws NotIntegrable when options.singularity_order >= 2.
void graded_corner_points(const std::array<Point2, 3>& tri, const GradedOptions& options,
                          std::vector<QuadraturePoint>& out);

double graded_corner_quadrature(const std::array<Point2, 3>& tri, const std::function<double(Point2)>& integrand,
                                const GradedOptions& options = {});

/// Integral over the circular sector {rho < radius, 0 < phi < pi/alpha} of
/// the section's corner wedge, graded dyadically in rho.
double graded_sector_quadrature(const PolygonalSection& section, double radius,
                                const std::function<double(Point2)>& integrand, const GradedOptions& options = {});

/// Per-triangle rule selection around a fixed singular point:
/// graded Duffy rule on triangles touching it, a high-order collapsed
/// Gauss rule on triangles within a few diameters of it, and the 6-point
/// rule everywhere else.
class CornerAwareRule {
 public:
  explicit CornerAwareRule(Point2 corner, GradedOptions options = {}, double near_factor = 3.0, int near_order = 8);

  /// Clears `out` and fills it with the points for `tri`.
  void points(const std::array<Point2, 3>& tri, std::vector<QuadraturePoint>& out) const;

  Point2 corner() const { return corner_; }

 private:
  Point2 corner_;
  GradedOptions options_;
  double near_factor_;
  ReferenceRule near_rule_;
};

}  // namespace fscm
