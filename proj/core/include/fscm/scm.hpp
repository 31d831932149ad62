#pragma once

#include "fscm/fem.hpp"
#include "fscm/singular_basis.hpp"

namespace fscm {

struct ScmConfig {
  /// Threshold constant C*; the complement is dropped once sqrt(mu) >= C* h^{-1/(2-alpha0)}.
  double c_star = 1.0;
  /// Exponent in (1/2, alpha).
  double alpha0 = 0.55;
  SolveOptions solver;

  /// Throws InvalidArgument unless c_star > 0 and 1/2 < alpha0 < alpha.
  void validate(double alpha) const;
};

/// C* h^{-1/(2-alpha0)}, the cut-off for sqrt(mu).
double threshold_sqrt_mu(const ScmConfig& config, double h);
bool threshold_applies(const ScmConfig& config, double h, double mu);

/// Right-hand side of one mode problem, reduced to what the algorithm uses.
struct ModeSource {
  NodalField load;          // (f, psi_j) on all vertices
  double ps_product = 0.0;  // (f, p_s^h)
  double l2_norm = 0.0;     // ||f||_0
};

/// Integrates a callback f with the corner-aware rule (p_P is singular).
ModeSource make_source(const SingularBasis& basis, const ScalarField2D& f);
/// Exact P1 products for nodal input.
ModeSource make_source(const SingularBasis& basis, const NodalField& f);

/// Both sides of the discrete stability bounds mu ||z||_0 <= ||f||_0 and
/// sqrt(mu) |z|_1 <= ||f||_0.
struct AprioriBounds {
  double mu_l2 = 0.0;
  double sqrt_mu_h1 = 0.0;
  double f_norm = 0.0;

  bool holds(double relative_slack = 1e-8) const {
    const double limit = f_norm * (1.0 + relative_slack);
    return mu_l2 <= limit && sqrt_mu_h1 <= limit;
  }
};

struct Step1Result {
  NodalField z;
  double c = 0.0;
  bool threshold_applied = false;
  AprioriBounds apriori;
  SolveStats stats;
};

/// ((f, p_s^h) - mu (z, p_s^h)) / ||p_s^h||_0^2.
double singular_coefficient(const ModeSource& source, const NodalField& z, double mu, const SingularBasis& basis);

/// Solves a_mu(z, v) = (f, v) on V_0^h and applies the threshold rule to
/// get the singular coefficient.
Step1Result scm_step1(const FemSystem& system, const ModeSource& source, const SingularBasis& basis,
                      const ScmConfig& config);

/// Regular part: a_mu(u~, v) = (f, v) - c a_mu(phi_s^h, v) on V_0^h.
NodalField scm_step2(const FemSystem& system, const ModeSource& source, const SingularBasis& basis, double c,
                     const ScmConfig& config);

/// u_h = u~_h + c (phi~_h + beta*_h phi_P) for one mode.
struct ModeSolution {
  int k = 0;
  double mu = 0.0;
  NodalField z;
  double c = 0.0;
  NodalField u_tilde;
  bool threshold_applied = false;
  AprioriBounds apriori;
  SingularBasisPtr basis;

  /// P1 part u~_h + c phi~_h.
  NodalField p1_part;
  /// Weight c beta*_h of the analytic phi_P.
  double singular_weight = 0.0;

  double evaluate(Point2 p) const;
  Point2 gradient(Point2 p) const;
  double evaluate_in(std::size_t triangle, const std::array<double, 3>& bary, Point2 p) const;
  Point2 gradient_in(std::size_t triangle, Point2 p) const;
};

ModeSolution assemble_mode(int k, double mu, Step1Result step1, NodalField u_tilde, SingularBasisPtr basis);

/// Steps 1 and 2 for one mode.
ModeSolution solve_mode(const FemSystem& system, const ModeSource& source, SingularBasisPtr basis,
                        const ScmConfig& config, int k = 0);

/// Standard P1 solution (no singular complement) packaged as a ModeSolution with c = 0.
ModeSolution solve_plain_fem(const FemSystem& system, const ModeSource& source, SingularBasisPtr basis,
                             const SolveOptions& solver = {}, int k = 0);

}  // namespace fscm
