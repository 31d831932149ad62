#include "fscm/singular_basis.hpp"

#include <cmath>
#include <numbers>

#include "fscm/errors.hpp"
#include "fscm/integration.hpp"

namespace fscm {

namespace {

constexpr std::uint32_t kCornerEdges = 0b11;

struct AnalyticTables {
  std::vector<double> pP_load;
  std::vector<double> phiP_mass;
  std::vector<double> phiP_stiffness;
  double pP_l2_sq = 0.0;
  double phiP_l2_sq = 0.0;
  double phiP_h1_sq = 0.0;
};

AnalyticTables tabulate(const TriMesh& mesh, const PolygonalSection& section, const CornerAwareRule& rule) {
  const std::size_t n = mesh.vertex_count();
  AnalyticTables tab;
  tab.pP_load.assign(n, 0.0);
  tab.phiP_mass.assign(n, 0.0);
  tab.phiP_stiffness.assign(n, 0.0);
  std::vector<Point2> grad_integral(mesh.triangle_count());

  for_each_quadrature_point(mesh, rule, [&](std::size_t t, const std::array<double, 3>& bary, Point2 p, double w) {
    const double pp = eval_pP(section, p);
    const double fp = eval_phiP(section, p);
    const Point2 g = grad_phiP(section, p);
    const Triangle& tri = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) {
      tab.pP_load[tri[i]] += w * pp * bary[i];
      tab.phiP_mass[tri[i]] += w * fp * bary[i];
    }
    grad_integral[t] = grad_integral[t] + w * g;
    tab.pP_l2_sq += w * pp * pp;
    tab.phiP_l2_sq += w * fp * fp;
    tab.phiP_h1_sq += w * dot(g, g);
  });

  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto grads = shape_gradients(mesh.corners(t));
    const Triangle& tri = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) tab.phiP_stiffness[tri[i]] += dot(grads[i], grad_integral[t]);
  }
  return tab;
}

PsResult compute_ps_from_tables(const std::shared_ptr<const FemMatrices>& matrices, const PolygonalSection& section,
                                const AnalyticTables& tab, const SolveOptions& solver) {
  const MeshPtr& mesh = matrices->mesh();
  NodalField boundary(mesh);
  for (std::size_t v = mesh->interior_count(); v < mesh->vertex_count(); ++v) {
    boundary[v] = boundary_data_s(section, *mesh, v);
  }
  const FemSystem laplace{matrices, 0.0};
  PsResult out{solve(laplace, NodalField(mesh), boundary, solver), 0.0};

  const auto pt = out.p_tilde.values();
  double cross_term = 0.0;
  for (std::size_t j = 0; j < pt.size(); ++j) cross_term += pt[j] * tab.pP_load[j];
  out.ps_norm_sq = matrices->mass_form(pt, pt) + 2.0 * cross_term + tab.pP_l2_sq;
  return out;
}

NodalField ps_load_vector(const FemMatrices& matrices, const NodalField& p_tilde, const AnalyticTables& tab) {
  NodalField load = load_vector(matrices, p_tilde);
  for (std::size_t j = 0; j < load.size(); ++j) load[j] += tab.pP_load[j];
  return load;
}

}  // namespace

double eval_pP(const PolygonalSection& section, Point2 p) {
  const PolarCoordinates pc = polar_at(section, p);
  if (pc.rho == 0.0) throw CornerSingularity("eval_pP: p_P is singular at the reentrant corner");
  const double a = section.alpha();
  return std::pow(pc.rho, -a) * std::sin(a * pc.phi);
}

double eval_phiP(const PolygonalSection& section, Point2 p) {
  const PolarCoordinates pc = polar_at(section, p);
  if (pc.rho == 0.0) return 0.0;
  const double a = section.alpha();
  return std::pow(pc.rho, a) * std::sin(a * pc.phi);
}

Point2 grad_phiP(const PolygonalSection& section, Point2 p) {
  const PolarCoordinates pc = polar_at(section, p);
  if (pc.rho == 0.0) throw CornerSingularity("grad_phiP: gradient is singular at the reentrant corner");
  const double a = section.alpha();
  const double scale = a * std::pow(pc.rho, a - 1.0);
  const double dr = scale * std::sin(a * pc.phi);
  const double dt = scale * std::cos(a * pc.phi);
  const double c = std::cos(pc.phi);
  const double s = std::sin(pc.phi);
  const Point2 local{dr * c - dt * s, dr * s + dt * c};
  const double cr = std::cos(section.frame().rotation);
  const double sr = std::sin(section.frame().rotation);
  return {cr * local.x - sr * local.y, sr * local.x + cr * local.y};
}

double boundary_data_s(const PolygonalSection& section, const TriMesh& mesh, std::size_t vertex) {
  if (!mesh.is_boundary(vertex)) throw InvalidArgument("boundary_data_s: vertex is not on the boundary");
  const std::uint32_t mask = mesh.edge_mask(vertex);
  const Point2 p = mesh.points()[vertex];
  if ((mask & kCornerEdges) == 0) return -eval_pP(section, p);
  if ((mask & ~kCornerEdges) != 0) {
    // Shared with an outer edge: the outer definition -p_P must agree with 0.
    const double outer = -eval_pP(section, p);
    if (std::abs(outer) > 1e-12) {
      throw Error("boundary_data_s: edge-wise boundary data disagree at a shared vertex");
    }
  }
  return 0.0;
}

double SingularBasis::eval_ps(Point2 p) const { return p_tilde.evaluate(p) + eval_pP(section, p); }

double SingularBasis::eval_phis(Point2 p) const { return phi_tilde.evaluate(p) + beta_star * eval_phiP(section, p); }

double SingularBasis::phis_a_norm_sq(double mu) const {
  const auto ft = phi_tilde.values();
  double cross_stiff = 0.0;
  double cross_mass = 0.0;
  for (std::size_t j = 0; j < ft.size(); ++j) {
    cross_stiff += ft[j] * phiP_stiffness[j];
    cross_mass += ft[j] * phiP_mass[j];
  }
  const double h1 = matrices->stiffness_form(ft, ft) + 2.0 * beta_star * cross_stiff + beta_star * beta_star * phiP_h1_sq;
  const double l2 = matrices->mass_form(ft, ft) + 2.0 * beta_star * cross_mass + beta_star * beta_star * phiP_l2_sq;
  return h1 + mu * l2;
}

PsResult compute_ps_h(const std::shared_ptr<const FemMatrices>& matrices, const PolygonalSection& section,
                      const SingularBasisOptions& options) {
  const CornerAwareRule rule(section.corner(), options.graded);
  const AnalyticTables tab = tabulate(*matrices->mesh(), section, rule);
  return compute_ps_from_tables(matrices, section, tab, options.solver);
}

NodalField compute_phis_h(const std::shared_ptr<const FemMatrices>& matrices, const PolygonalSection& section,
                          const NodalField& ps_load, double beta_star, const SingularBasisOptions& options) {
  const MeshPtr& mesh = matrices->mesh();
  NodalField boundary(mesh);
  for (std::size_t v = mesh->interior_count(); v < mesh->vertex_count(); ++v) {
    boundary[v] = (mesh->edge_mask(v) & kCornerEdges) ? 0.0 : -beta_star * eval_phiP(section, mesh->points()[v]);
  }
  return solve(FemSystem{matrices, 0.0}, ps_load, boundary, options.solver);
}

SingularBasisPtr build_singular_basis(const std::shared_ptr<const FemMatrices>& matrices,
                                      const PolygonalSection& section, const SingularBasisOptions& options) {
  auto basis = std::make_shared<SingularBasis>(SingularBasis{
      matrices, section, CornerAwareRule(section.corner(), options.graded), {}, {}, 0.0, 0.0, {}, {}, {}, {}, 0.0, 0.0,
      0.0});
  AnalyticTables tab = tabulate(*matrices->mesh(), section, basis->rule);

  PsResult ps = compute_ps_from_tables(matrices, section, tab, options.solver);
  basis->p_tilde = std::move(ps.p_tilde);
  basis->ps_norm_sq = ps.ps_norm_sq;
  basis->beta_star = ps.ps_norm_sq / std::numbers::pi;
  basis->ps_load = ps_load_vector(*matrices, basis->p_tilde, tab);
  basis->phi_tilde = compute_phis_h(matrices, section, basis->ps_load, basis->beta_star, options);

  basis->pP_load = std::move(tab.pP_load);
  basis->phiP_mass = std::move(tab.phiP_mass);
  basis->phiP_stiffness = std::move(tab.phiP_stiffness);
  basis->pP_l2_sq = tab.pP_l2_sq;
  basis->phiP_l2_sq = tab.phiP_l2_sq;
  basis->phiP_h1_sq = tab.phiP_h1_sq;
  return basis;
}

}  // namespace fscm
