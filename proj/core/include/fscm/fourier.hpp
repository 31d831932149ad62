#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fscm/scm.hpp"

namespace fscm {

/// Omega = section x (0, L).
struct PrismSpec {
  PolygonalSection section;
  double length = 1.0;

  void validate() const;
  double mode_mu(int k) const;
};

using ScalarField3D = std::function<double(Point2, double)>;

/// Sine coefficients in x3, f_k(x) = (2/L) int_0^L f(x, x3) sin(k pi x3 / L) dx3,
/// by composite Gauss-Legendre with a fixed panel count.
class ModeProjector {
 public:
  /// panels = 0 selects max(64, 8 modes).
  ModeProjector(double length, int modes, int panels = 0, int points_per_panel = 4);

  int modes() const { return modes_; }
  std::span<const double> nodes() const { return nodes_; }

  /// out[k - 1] = f_k(x) for k = 1..modes().
  void project(const ScalarField3D& f, Point2 x, std::span<double> out) const;

 private:
  int modes_;
  std::vector<double> nodes_;
  std::vector<double> weights_;  // include the 2/L factor
  std::vector<double> sines_;    // sines_[q * modes + k - 1]
};

/// Nodal values of f_k at the mesh vertices.
NodalField mode_coefficients(const ScalarField3D& f, const PrismSpec& prism, int k, const MeshPtr& mesh);

struct FscmOptions {
  ScmConfig scm;
  SingularBasisOptions basis;
  /// Worker threads for the mode loop; results do not depend on this.
  int threads = 1;
  /// x3 panel count; 0 selects max(64, 8N).
  int panels = 0;
};

/// U_N^h = sum_k u_k^h(x1, x2) sin(k pi x3 / L).
struct FscmSolution {
  PrismSpec prism;
  SingularBasisPtr basis;
  std::vector<ModeSolution> modes;  // modes[k - 1]

  int mode_count() const { return static_cast<int>(modes.size()); }
  std::size_t threshold_count() const;

  /// Throws OutsideDomain outside the closed prism.
  double evaluate(Point2 x, double x3) const;
  std::array<double, 3> gradient(Point2 x, double x3) const;
};

/// Per-mode SCM solves for k = 1..N with mu_k = (k pi / L)^2, reusing one
/// stiffness/mass pair and one singular basis for every mode.
FscmSolution fscm_solve(const PrismSpec& prism, const ScalarField3D& f, int n, int N, const FscmOptions& options = {});
FscmSolution fscm_solve(const PrismSpec& prism, const ScalarField3D& f, SingularBasisPtr basis, int N,
                        const FscmOptions& options = {});

/// Smallest k for which the complement is dropped: k >= C* (L/pi) h^{-1/(2-alpha0)}.
double mode_threshold(const ScmConfig& config, const PrismSpec& prism, double h);

/// One separable piece g(x3) U(x1, x2) of an exact 3D field.
struct SeparableTerm {
  std::function<double(double)> profile;     // g
  std::function<double(double)> profile_d1;  // g'
  std::function<double(double)> profile_d2;  // g''
  /// Exact (2/L) int g sin(k pi x3 / L); computed numerically when empty.
  std::function<double(int)> sine_coefficient;

  ScalarField2D section;                     // U
  std::function<Point2(Point2)> section_gradient;
  ScalarField2D section_laplacian;           // Delta U
};

/// Exact field u = sum_j g_j(x3) U_j(x1, x2) on a prism.
struct SeparableField3D {
  double length = 1.0;
  std::vector<SeparableTerm> terms;

  double value(Point2 x, double x3) const;
  std::array<double, 3> gradient(Point2 x, double x3) const;
  /// f = -Delta u.
  double source(Point2 x, double x3) const;
  /// Sine coefficient of term j for mode k.
  double coefficient(std::size_t j, int k) const;
};

struct H1Error3D {
  double total = 0.0;                 // ||grad(u - U_N^h)||_{L2(Omega)}
  std::vector<double> mode_a_errors;  // ||u_k - u_k^h||_{a_k}, k = 1..N
  double tail = 0.0;                  // sqrt((L/2) sum_{k > N} ||u_k||_{a_k}^2)
};

/// Mode-wise a-norm errors (corner-aware quadrature) plus the truncation
/// tail from the exact sine coefficients up to k = reference_modes
/// (0 selects N + 4096 with closed-form coefficients, 2N + 64 otherwise).
H1Error3D h1_error_3d(const FscmSolution& solution, const SeparableField3D& exact, int reference_modes = 0);

}  // namespace fscm
