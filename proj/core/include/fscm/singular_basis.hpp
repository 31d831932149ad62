#pragma once

#include <memory>
#include <vector>

#include "fscm/fem.hpp"
#include "fscm/geometry.hpp"
#include "fscm/quadrature.hpp"

namespace fscm {

/// p_P = rho^{-alpha} sin(alpha phi). Throws CornerSingularity at rho = 0.
double eval_pP(const PolygonalSection& section, Point2 p);
/// phi_P = rho^{alpha} sin(alpha phi); zero at the corner.
double eval_phiP(const PolygonalSection& section, Point2 p);
/// Gradient of phi_P in global coordinates. Throws CornerSingularity at rho = 0.
Point2 grad_phiP(const PolygonalSection& section, Point2 p);

/// Boundary data of the regular part of the dual singular function:
/// 0 on the two corner edges, -p_P on every other edge.
double boundary_data_s(const PolygonalSection& section, const TriMesh& mesh, std::size_t vertex);

struct SingularBasisOptions {
  GradedOptions graded;
  SolveOptions solver;
};

/// Discrete dual singular function p_s^h = p~_h + p_P and singular
/// complement phi_s^h = phi~_h + beta*_h phi_P on one mesh.
///
/// Integrals against p_P and phi_P are tabulated per vertex with the
/// corner-aware rule so that later inner products with any P1 field are
/// plain dot products.
struct SingularBasis {
  std::shared_ptr<const FemMatrices> matrices;
  PolygonalSection section;
  CornerAwareRule rule;

  NodalField p_tilde;
  NodalField phi_tilde;
  double ps_norm_sq = 0.0;  // ||p_s^h||_0^2
  double beta_star = 0.0;   // ||p_s^h||_0^2 / pi

  std::vector<double> pP_load;         // (p_P, psi_j)
  std::vector<double> phiP_mass;       // (phi_P, psi_j)
  std::vector<double> phiP_stiffness;  // (grad phi_P, grad psi_j)
  NodalField ps_load;                  // (p_s^h, psi_j)
  double pP_l2_sq = 0.0;               // ||p_P||_0^2 over the section
  double phiP_l2_sq = 0.0;
  double phiP_h1_sq = 0.0;

  const MeshPtr& mesh() const { return matrices->mesh(); }
  double alpha() const { return section.alpha(); }
  double eval_ps(Point2 p) const;
  double eval_phis(Point2 p) const;
  /// ||phi_s^h||_a^2 for the given mu.
  double phis_a_norm_sq(double mu) const;
};

using SingularBasisPtr = std::shared_ptr<const SingularBasis>;

struct PsResult {
  NodalField p_tilde;
  double ps_norm_sq = 0.0;
};

/// Discrete harmonic p~_h with nodal boundary interpolant of s, and ||p_s^h||_0^2.
PsResult compute_ps_h(const std::shared_ptr<const FemMatrices>& matrices, const PolygonalSection& section,
                      const SingularBasisOptions& options = {});

/// phi~_h with boundary values -beta*_h phi_P solving (grad phi~_h, grad v) = (p_s^h, v).
NodalField compute_phis_h(const std::shared_ptr<const FemMatrices>& matrices, const PolygonalSection& section,
                          const NodalField& ps_load, double beta_star, const SingularBasisOptions& options = {});

SingularBasisPtr build_singular_basis(const std::shared_ptr<const FemMatrices>& matrices,
                                      const PolygonalSection& section, const SingularBasisOptions& options = {});

}  // namespace fscm
