#pragma once

#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fscm/manufactured.hpp"

namespace fscm {

/// Least-squares slope of log(y) against log(x). Needs at least two points
/// with positive coordinates.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Slopes between consecutive points; the first entry is NaN.
std::vector<double> running_slopes(std::span<const double> x, std::span<const double> y);

struct RateRow {
  int level = 0;
  double h = 0.0;
  int N = 0;
  double a_error = 0.0;
  double h1_error = 0.0;
  double c = 0.0;  // cH of the (first) mode
  double slope_running = 0.0;
  bool apriori_ok = true;
};

struct RateReport {
  std::string suite;
  std::vector<RateRow> rows;
  /// Fitted against h for refinement suites and against N for mode sweeps.
  double slope = 0.0;
  double h1_slope = 0.0;
  unsigned seed = 0;
  double residual_check = 0.0;  // max relative residual of the manufactured problem
  int apriori_checks = 0;       // mode solves whose stability bounds were checked

  bool apriori_ok() const;
};

enum class Suite { Scm2d, Fem2d, Fscm3d };

/// "scm2d", "fem2d" or "fscm3d"; throws InvalidArgument otherwise.
Suite parse_suite(const std::string& name);
std::string to_string(Suite suite);

struct ConvergenceSettings {
  int base_n = 8;
  int levels = 4;
  double mu = std::numbers::pi * std::numbers::pi;
  double length = 1.0;
  double r0 = 0.25;
  ScmConfig scm;
  SingularBasisOptions basis;
  unsigned seed = 20240601;
  /// Levels solved concurrently; the report is ordered by level regardless.
  int threads = 1;
};

/// Manufactured-solution refinement study on the L-shape with n = base_n 2^i,
/// i < levels. The 2D suites use the singular problem at settings.mu; fscm3d
/// uses the two-mode prism problem with N = ceil(1/h).
/// Solver failures of all levels are collected into one Error.
RateReport run_convergence(Suite suite, const ConvergenceSettings& settings);

/// Fixed mesh, varying mode count, on the algebraically decaying prism problem.
RateReport run_mode_sweep(int n, std::span<const int> mode_counts, const ConvergenceSettings& settings);

/// P1 field of a coarse mesh evaluated at the vertices of a finer nested mesh.
NodalField prolongate(const NodalField& coarse, const MeshPtr& fine);

/// Differences between the singular bases of two nested meshes, measured on the fine one.
struct BasisDifference {
  double ps_h1 = 0.0;    // |p_s^H - p_s^h|_1
  double ps_l2 = 0.0;    // ||p_s^H - p_s^h||_0
  double phis_h1 = 0.0;  // |phi_s^H - phi_s^h|_1
  double beta = 0.0;     // |beta*_H - beta*_h|
};

BasisDifference basis_difference(const SingularBasis& coarse, const SingularBasis& fine);

/// beta* from two meshes with ratio 2, assuming an error of order h^{2 alpha0}.
double extrapolate_beta_star(double beta_coarse, double beta_fine, double alpha0);

}  // namespace fscm
