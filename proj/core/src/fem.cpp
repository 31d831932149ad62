#include "fscm/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fscm/errors.hpp"
#include "fscm/pcg.hpp"
#include "fscm/quadrature.hpp"

namespace fscm {

NodalField::NodalField(MeshPtr mesh) : mesh_(std::move(mesh)), values_(mesh_->vertex_count(), 0.0) {}

NodalField::NodalField(MeshPtr mesh, std::vector<double> values) : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (values_.size() != mesh_->vertex_count()) throw InvalidArgument("NodalField: size does not match mesh");
}

double NodalField::evaluate(Point2 p) const {
  const auto loc = mesh_->locate(p);
  if (!loc) throw OutsideDomain("NodalField::evaluate: point outside the mesh");
  return evaluate_in(loc->triangle, loc->bary);
}

double NodalField::evaluate_in(std::size_t triangle, const std::array<double, 3>& bary) const {
  const Triangle& t = mesh_->triangles()[triangle];
  return bary[0] * values_[t[0]] + bary[1] * values_[t[1]] + bary[2] * values_[t[2]];
}

Point2 NodalField::gradient_in(std::size_t triangle) const {
  const auto grads = shape_gradients(mesh_->corners(triangle));
  const Triangle& t = mesh_->triangles()[triangle];
  Point2 g;
  for (int i = 0; i < 3; ++i) g = g + values_[t[i]] * grads[i];
  return g;
}

std::array<Point2, 3> shape_gradients(const std::array<Point2, 3>& tri) {
  const double twice = cross(tri[1] - tri[0], tri[2] - tri[0]);
  if (std::abs(twice) < 2e-14) throw DegenerateTriangle("shape_gradients: degenerate triangle");
  const double s = 1.0 / twice;
  return {s * Point2{tri[1].y - tri[2].y, tri[2].x - tri[1].x}, s * Point2{tri[2].y - tri[0].y, tri[0].x - tri[2].x},
          s * Point2{tri[0].y - tri[1].y, tri[1].x - tri[0].x}};
}

ElementMatrices element_matrices(const std::array<Point2, 3>& tri) {
  const double area = 0.5 * std::abs(cross(tri[1] - tri[0], tri[2] - tri[0]));
  if (area < 1e-14) throw DegenerateTriangle("element_matrices: triangle area below 1e-14");
  const auto g = shape_gradients(tri);
  ElementMatrices m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m.stiffness[i][j] = area * dot(g[i], g[j]);
      m.mass[i][j] = area / 12.0 * (i == j ? 2.0 : 1.0);
    }
  }
  return m;
}

FemMatrices::FemMatrices(MeshPtr mesh) : mesh_(std::move(mesh)) {
  const std::size_t n = mesh_->vertex_count();
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (const Triangle& t : mesh_->triangles()) {
    for (std::size_t a : t) {
      for (std::size_t b : t) adjacency[a].push_back(b);
    }
  }
  row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = adjacency[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    row_ptr_[i + 1] = row_ptr_[i] + row.size();
  }
  cols_.reserve(row_ptr_[n]);
  for (const auto& row : adjacency) cols_.insert(cols_.end(), row.begin(), row.end());

  const std::size_t ni = mesh_->interior_count();
  interior_end_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    interior_end_[i] = static_cast<std::size_t>(std::lower_bound(begin, end, ni) - cols_.begin());
  }

  stiffness_.assign(cols_.size(), 0.0);
  mass_.assign(cols_.size(), 0.0);
  for (std::size_t e = 0; e < mesh_->triangle_count(); ++e) {
    const Triangle& t = mesh_->triangles()[e];
    const ElementMatrices m = element_matrices(mesh_->corners(e));
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const std::size_t k = find(t[a], t[b]);
        stiffness_[k] += m.stiffness[a][b];
        mass_[k] += m.mass[a][b];
      }
    }
  }
}

std::size_t FemMatrices::find(std::size_t i, std::size_t j) const {
  const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return cols_.size();
  return static_cast<std::size_t>(it - cols_.begin());
}

double FemMatrices::stiffness_at(std::size_t i, std::size_t j) const {
  const std::size_t k = find(i, j);
  return k == cols_.size() ? 0.0 : stiffness_[k];
}

double FemMatrices::mass_at(std::size_t i, std::size_t j) const {
  const std::size_t k = find(i, j);
  return k == cols_.size() ? 0.0 : mass_[k];
}

void FemMatrices::apply(double mu, std::span<const double> x, std::span<double> y) const {
  const std::size_t n = row_ptr_.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += (stiffness_[k] + mu * mass_[k]) * x[cols_[k]];
    y[i] = s;
  }
}

void FemMatrices::apply_interior(double mu, std::span<const double> x, std::span<double> y) const {
  const std::size_t ni = mesh_->interior_count();
  for (std::size_t i = 0; i < ni; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < interior_end_[i]; ++k) s += (stiffness_[k] + mu * mass_[k]) * x[cols_[k]];
    y[i] = s;
  }
}

void FemMatrices::apply_coupling(double mu, std::span<const double> full, std::span<double> y) const {
  const std::size_t ni = mesh_->interior_count();
  for (std::size_t i = 0; i < ni; ++i) {
    double s = 0.0;
    for (std::size_t k = interior_end_[i]; k < row_ptr_[i + 1]; ++k) s += (stiffness_[k] + mu * mass_[k]) * full[cols_[k]];
    y[i] = s;
  }
}

std::vector<double> FemMatrices::interior_diagonal(double mu) const {
  std::vector<double> d(mesh_->interior_count());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::size_t k = find(i, i);
    d[i] = stiffness_[k] + mu * mass_[k];
  }
  return d;
}

double FemMatrices::stiffness_form(std::span<const double> x, std::span<const double> y) const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < row_ptr_.size(); ++i) {
    double row = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) row += stiffness_[k] * y[cols_[k]];
    s += x[i] * row;
  }
  return s;
}

double FemMatrices::mass_form(std::span<const double> x, std::span<const double> y) const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < row_ptr_.size(); ++i) {
    double row = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) row += mass_[k] * y[cols_[k]];
    s += x[i] * row;
  }
  return s;
}

FemSystem FemSystem::with_mu(double new_mu) const {
  if (new_mu < 0.0) throw InvalidArgument("FemSystem: mu must be nonnegative");
  return FemSystem{matrices, new_mu};
}

double FemSystem::form(std::span<const double> x, std::span<const double> y) const {
  return matrices->stiffness_form(x, y) + mu * matrices->mass_form(x, y);
}

FemSystem assemble(MeshPtr mesh, double mu) {
  if (mu < 0.0) throw InvalidArgument("assemble: mu must be nonnegative");
  return FemSystem{std::make_shared<const FemMatrices>(std::move(mesh)), mu};
}

NodalField solve(const FemSystem& system, const NodalField& rhs, const NodalField& boundary_values,
                 const SolveOptions& options, SolveStats* stats) {
  const FemMatrices& m = *system.matrices;
  const MeshPtr& mesh = m.mesh();
  const std::size_t n = mesh->vertex_count();
  const std::size_t ni = mesh->interior_count();
  if (rhs.size() != n || boundary_values.size() != n) {
    throw InvalidArgument("solve: rhs and boundary values must cover every vertex");
  }

  std::vector<double> full(n, 0.0);
  for (std::size_t v = ni; v < n; ++v) full[v] = boundary_values[v];

  std::vector<double> b(ni);
  m.apply_coupling(system.mu, full, b);
  for (std::size_t i = 0; i < ni; ++i) b[i] = rhs[i] - b[i];

  std::vector<double> inv_diag = m.interior_diagonal(system.mu);
  for (double& d : inv_diag) d = 1.0 / d;

  std::vector<double> x(ni, 0.0);
  const double mu = system.mu;
  const int cap = options.iteration_cap_factor * static_cast<int>(std::max<std::size_t>(ni, 1));
  const PcgResult r = pcg_solve(
      [&m, mu](std::span<const double> in, std::span<double> out) { m.apply_interior(mu, in, out); }, inv_diag, b, x,
      options.tolerance, cap);
  if (stats) *stats = {r.iterations, r.relative_residual};
  if (!r.converged) {
    throw NoConvergence("solve: PCG did not converge (relative residual " + std::to_string(r.relative_residual) + ")",
                        r.iterations, r.relative_residual);
  }
  std::copy(x.begin(), x.end(), full.begin());
  return NodalField(mesh, std::move(full));
}

std::vector<double> galerkin_residual(const FemSystem& system, const NodalField& u, const NodalField& rhs) {
  const std::size_t n = u.size();
  std::vector<double> au(n);
  system.matrices->apply(system.mu, u.values(), au);
  au.resize(system.mesh()->interior_count());
  for (std::size_t i = 0; i < au.size(); ++i) au[i] -= rhs[i];
  return au;
}

NodalField load_vector(const MeshPtr& mesh, const ScalarField2D& f) {
  NodalField out(mesh);
  const ReferenceRule& rule = triangle_rule_order4();
  std::vector<QuadraturePoint> pts;
  for (std::size_t e = 0; e < mesh->triangle_count(); ++e) {
    const auto c = mesh->corners(e);
    pts.clear();
    map_rule(rule, c, pts);
    const Triangle& t = mesh->triangles()[e];
    std::size_t q = 0;
    for (const auto& [xi, eta, w] : rule.points) {
      const double fw = f(pts[q].point) * pts[q].weight;
      out[t[0]] += fw * (1.0 - xi - eta);
      out[t[1]] += fw * xi;
      out[t[2]] += fw * eta;
      ++q;
    }
  }
  return out;
}

NodalField load_vector(const FemMatrices& matrices, const NodalField& f) {
  NodalField out(matrices.mesh());
  const auto rows = matrices.row_offsets();
  const auto cols = matrices.columns();
  const auto mass = matrices.mass_values();
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = rows[i]; k < rows[i + 1]; ++k) s += mass[k] * f[cols[k]];
    out[i] = s;
  }
  return out;
}

double l2_norm(const FemMatrices& matrices, const NodalField& u) {
  return std::sqrt(std::max(0.0, matrices.mass_form(u.values(), u.values())));
}

double h1_seminorm(const FemMatrices& matrices, const NodalField& u) {
  return std::sqrt(std::max(0.0, matrices.stiffness_form(u.values(), u.values())));
}

}  // namespace fscm
