#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fscm/mesh.hpp"

namespace fscm {

using ScalarField2D = std::function<double(Point2)>;

/// Values indexed by mesh vertex: P1 coefficients or, for load vectors,
/// the entries (f, psi_j).
class NodalField {
 public:
  NodalField() = default;
  explicit NodalField(MeshPtr mesh);
  NodalField(MeshPtr mesh, std::vector<double> values);

  const MeshPtr& mesh() const { return mesh_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// P1 interpolant at a point; throws OutsideDomain if the point is not in the mesh.
  double evaluate(Point2 p) const;
  double evaluate_in(std::size_t triangle, const std::array<double, 3>& bary) const;
  /// Constant gradient of the P1 interpolant on a triangle.
  Point2 gradient_in(std::size_t triangle) const;

 private:
  MeshPtr mesh_;
  std::vector<double> values_;
};

struct ElementMatrices {
  std::array<std::array<double, 3>, 3> stiffness{};
  std::array<std::array<double, 3>, 3> mass{};
};

/// Gradients of the three barycentric coordinates.
std::array<Point2, 3> shape_gradients(const std::array<Point2, 3>& tri);

/// Exact P1 blocks; mass = area/12 (1 + delta_ij). Throws DegenerateTriangle if area < 1e-14.
ElementMatrices element_matrices(const std::array<Point2, 3>& tri);

/// Global P1 stiffness and mass on one CSR pattern over all vertices.
///
/// Column indices are sorted per row, so with interior-first numbering the
/// interior block of each interior row is a prefix of that row.
class FemMatrices {
 public:
  explicit FemMatrices(MeshPtr mesh);

  const MeshPtr& mesh() const { return mesh_; }
  std::span<const std::size_t> row_offsets() const { return row_ptr_; }
  std::span<const std::size_t> columns() const { return cols_; }
  std::span<const double> stiffness_values() const { return stiffness_; }
  std::span<const double> mass_values() const { return mass_; }

  double stiffness_at(std::size_t i, std::size_t j) const;
  double mass_at(std::size_t i, std::size_t j) const;

  /// y = (K + mu M) x over all vertices.
  void apply(double mu, std::span<const double> x, std::span<double> y) const;
  /// y_I = (K_II + mu M_II) x_I, interior unknowns only.
  void apply_interior(double mu, std::span<const double> x, std::span<double> y) const;
  /// y_I = (K_IB + mu M_IB) g_B where `full` carries the boundary values.
  void apply_coupling(double mu, std::span<const double> full, std::span<double> y) const;
  std::vector<double> interior_diagonal(double mu) const;

  double stiffness_form(std::span<const double> x, std::span<const double> y) const;
  double mass_form(std::span<const double> x, std::span<const double> y) const;

 private:
  std::size_t find(std::size_t i, std::size_t j) const;

  MeshPtr mesh_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<std::size_t> interior_end_;
  std::vector<double> stiffness_;
  std::vector<double> mass_;
};

/// The operator K + mu M on V_0^h, sharing its matrices with every other
/// system built from the same FemMatrices.
struct FemSystem {
  std::shared_ptr<const FemMatrices> matrices;
  double mu = 0.0;

  const MeshPtr& mesh() const { return matrices->mesh(); }
  FemSystem with_mu(double new_mu) const;
  /// a_mu(x, y) over all vertices.
  double form(std::span<const double> x, std::span<const double> y) const;
};

FemSystem assemble(MeshPtr mesh, double mu);

struct SolveOptions {
  double tolerance = 1e-10;
  int iteration_cap_factor = 20;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Galerkin solve of a_mu(u, v) = rhs(v) for all v in V_0^h with u equal to
/// boundary_values on the boundary vertices. `rhs` holds load entries on all
/// vertices; only interior rows are used. Throws NoConvergence.
NodalField solve(const FemSystem& system, const NodalField& rhs, const NodalField& boundary_values,
                 const SolveOptions& options = {}, SolveStats* stats = nullptr);

/// Interior rows of a_mu(u, psi_i) - rhs_i.
std::vector<double> galerkin_residual(const FemSystem& system, const NodalField& u, const NodalField& rhs);

/// (f, psi_j) with the 6-point order-4 rule.
NodalField load_vector(const MeshPtr& mesh, const ScalarField2D& f);
/// (f_h, psi_j) = M f for nodal input, exact.
NodalField load_vector(const FemMatrices& matrices, const NodalField& f);

double l2_norm(const FemMatrices& matrices, const NodalField& u);
double h1_seminorm(const FemMatrices& matrices, const NodalField& u);

}  // namespace fscm
