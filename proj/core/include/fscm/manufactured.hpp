#pragma once

#include <optional>
#include <string>

#include "fscm/fourier.hpp"
#include "fscm/scm.hpp"

namespace fscm {

/// C^2 quintic cut-off: 1 for rho <= r0, 0 for rho >= 2 r0.
struct Cutoff {
  double r0 = 0.25;

  double value(double rho) const;
  double d1(double rho) const;
  double d2(double rho) const;
};

/// Exact solution of -Delta u + mu u = f on a section, with f computed analytically.
struct ManufacturedProblem2D {
  std::string name;
  double mu = 0.0;
  ScalarField2D u;
  std::function<Point2(Point2)> grad;
  ScalarField2D f;
  /// Coefficient of phi_s in the splitting u = u~ + c phi_s, when known.
  std::optional<double> c_exact;
};

/// Smooth u = x y (1 - x^2)(1 - y^2), which vanishes on every edge of the
/// L-shape; its singular coefficient is zero.
ManufacturedProblem2D problem_regular2d(double mu);

/// u = xi(rho) rho^alpha sin(alpha phi). The rho^alpha coefficient is 1, so
/// c = 1/beta*; pass the best available beta* (or leave c_exact empty with 0).
ManufacturedProblem2D problem_singular2d(const PolygonalSection& section, double mu, double beta_star = 0.0,
                                         double r0 = 0.25);

/// Exact 3D solution of -Delta u = f on a prism.
struct ManufacturedProblem3D {
  std::string name;
  SeparableField3D exact;
  ScalarField3D f;
  /// f in h^2 with vanishing traces on the bases.
  bool smooth_in_x3 = false;
};

/// u = sin(pi x3/L) xi(rho) rho^alpha sin(alpha phi) + sin(2 pi x3/L) B(x1, x2)
/// with B the bubble of problem_regular2d.
ManufacturedProblem3D problem_singular3d(const PrismSpec& prism, double r0 = 0.25);

/// u = x3 (L - x3) B(x1, x2): sine coefficients decay like k^{-3}.
ManufacturedProblem3D problem_algebraic3d(const PrismSpec& prism);

struct ResidualCheck {
  bool passed = false;
  double max_relative = 0.0;
  unsigned seed = 0;
  int points = 0;
};

/// Finite-difference check of -Delta u + mu u = f at random interior points
/// (at distance >= 0.05 from the corner and the boundary).
ResidualCheck check_residual(const ManufacturedProblem2D& problem, const PolygonalSection& section,
                             unsigned seed = 20240601, int points = 20, double tolerance = 1e-5);
ResidualCheck check_residual(const ManufacturedProblem3D& problem, const PrismSpec& prism,
                             unsigned seed = 20240601, int points = 20, double tolerance = 1e-5);

struct ErrorNorms {
  double a_norm = 0.0;  // sqrt(|e|_1^2 + mu ||e||_0^2)
  double h1 = 0.0;      // |e|_1
  double l2 = 0.0;      // ||e||_0
};

/// Errors of a mode solution against an exact field, integrated with the
/// corner-aware rule of the solution's singular basis.
ErrorNorms a_norm_error(const ModeSolution& uh, const ScalarField2D& u, const std::function<Point2(Point2)>& grad,
                        double mu);
ErrorNorms a_norm_error(const ModeSolution& uh, const ManufacturedProblem2D& problem);

}  // namespace fscm
