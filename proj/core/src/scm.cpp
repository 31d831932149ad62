#include "fscm/scm.hpp"

#include <cmath>

#include "fscm/errors.hpp"
#include "fscm/integration.hpp"

namespace fscm {

void ScmConfig::validate(double alpha) const {
  if (!(c_star > 0.0)) throw InvalidArgument("ScmConfig: C* must be positive");
  if (!(alpha0 > 0.5 && alpha0 < alpha)) throw InvalidArgument("ScmConfig: alpha0 must lie in (1/2, alpha)");
}

double threshold_sqrt_mu(const ScmConfig& config, double h) {
  return config.c_star * std::pow(h, -1.0 / (2.0 - config.alpha0));
}

bool threshold_applies(const ScmConfig& config, double h, double mu) {
  return std::sqrt(mu) >= threshold_sqrt_mu(config, h);
}

ModeSource make_source(const SingularBasis& basis, const ScalarField2D& f) {
  const MeshPtr& mesh = basis.mesh();
  ModeSource src{NodalField(mesh), 0.0, 0.0};
  double f_pP = 0.0;
  double f_sq = 0.0;
  for_each_quadrature_point(*mesh, basis.rule, [&](std::size_t t, const std::array<double, 3>& bary, Point2 p,
                                                   double w) {
    const double fv = f(p);
    const Triangle& tri = mesh->triangles()[t];
    for (int i = 0; i < 3; ++i) src.load[tri[i]] += w * fv * bary[i];
    f_pP += w * fv * eval_pP(basis.section, p);
    f_sq += w * fv * fv;
  });
  double f_pt = 0.0;
  for (std::size_t j = 0; j < src.load.size(); ++j) f_pt += src.load[j] * basis.p_tilde[j];
  src.ps_product = f_pt + f_pP;
  src.l2_norm = std::sqrt(f_sq);
  return src;
}

ModeSource make_source(const SingularBasis& basis, const NodalField& f) {
  ModeSource src{load_vector(*basis.matrices, f), 0.0, l2_norm(*basis.matrices, f)};
  for (std::size_t j = 0; j < f.size(); ++j) src.ps_product += f[j] * basis.ps_load[j];
  return src;
}

double singular_coefficient(const ModeSource& source, const NodalField& z, double mu, const SingularBasis& basis) {
  double z_ps = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) z_ps += z[j] * basis.ps_load[j];
  return (source.ps_product - mu * z_ps) / basis.ps_norm_sq;
}

Step1Result scm_step1(const FemSystem& system, const ModeSource& source, const SingularBasis& basis,
                      const ScmConfig& config) {
  config.validate(basis.alpha());
  Step1Result out;
  out.z = solve(system, source.load, NodalField(system.mesh()), config.solver, &out.stats);

  const double mu = system.mu;
  out.apriori = {mu * l2_norm(*system.matrices, out.z), std::sqrt(mu) * h1_seminorm(*system.matrices, out.z),
                 source.l2_norm};

  out.threshold_applied = threshold_applies(config, system.mesh()->h(), mu);
  out.c = out.threshold_applied ? 0.0 : singular_coefficient(source, out.z, mu, basis);
  return out;
}

NodalField scm_step2(const FemSystem& system, const ModeSource& source, const SingularBasis& basis, double c,
                     const ScmConfig& config) {
  const MeshPtr& mesh = system.mesh();
  if (c == 0.0) return solve(system, source.load, NodalField(mesh), config.solver);

  // a_mu(phi_s^h, psi_j) = a_mu(phi~_h, psi_j) + beta*_h a_mu(phi_P, psi_j)
  std::vector<double> a_phis(mesh->vertex_count());
  system.matrices->apply(system.mu, basis.phi_tilde.values(), a_phis);
  NodalField rhs(mesh);
  for (std::size_t j = 0; j < rhs.size(); ++j) {
    a_phis[j] += basis.beta_star * (basis.phiP_stiffness[j] + system.mu * basis.phiP_mass[j]);
    rhs[j] = source.load[j] - c * a_phis[j];
  }
  return solve(system, rhs, NodalField(mesh), config.solver);
}

double ModeSolution::evaluate(Point2 p) const {
  return p1_part.evaluate(p) + singular_weight * eval_phiP(basis->section, p);
}

Point2 ModeSolution::gradient(Point2 p) const {
  const auto loc = p1_part.mesh()->locate(p);
  if (!loc) throw OutsideDomain("ModeSolution::gradient: point outside the mesh");
  return gradient_in(loc->triangle, p);
}

double ModeSolution::evaluate_in(std::size_t triangle, const std::array<double, 3>& bary, Point2 p) const {
  const double reg = p1_part.evaluate_in(triangle, bary);
  return singular_weight == 0.0 ? reg : reg + singular_weight * eval_phiP(basis->section, p);
}

Point2 ModeSolution::gradient_in(std::size_t triangle, Point2 p) const {
  const Point2 reg = p1_part.gradient_in(triangle);
  return singular_weight == 0.0 ? reg : reg + singular_weight * grad_phiP(basis->section, p);
}

ModeSolution assemble_mode(int k, double mu, Step1Result step1, NodalField u_tilde, SingularBasisPtr basis) {
  ModeSolution m;
  m.k = k;
  m.mu = mu;
  m.c = step1.c;
  m.threshold_applied = step1.threshold_applied;
  m.apriori = step1.apriori;
  m.z = std::move(step1.z);
  m.u_tilde = std::move(u_tilde);
  m.p1_part = m.u_tilde;
  if (m.c != 0.0) {
    for (std::size_t j = 0; j < m.p1_part.size(); ++j) m.p1_part[j] += m.c * basis->phi_tilde[j];
  }
  m.singular_weight = m.c * basis->beta_star;
  m.basis = std::move(basis);
  return m;
}

ModeSolution solve_mode(const FemSystem& system, const ModeSource& source, SingularBasisPtr basis,
                        const ScmConfig& config, int k) {
  Step1Result step1 = scm_step1(system, source, *basis, config);
  NodalField u_tilde = step1.c == 0.0 ? step1.z : scm_step2(system, source, *basis, step1.c, config);
  return assemble_mode(k, system.mu, std::move(step1), std::move(u_tilde), std::move(basis));
}

ModeSolution solve_plain_fem(const FemSystem& system, const ModeSource& source, SingularBasisPtr basis,
                             const SolveOptions& solver, int k) {
  Step1Result step1;
  step1.z = solve(system, source.load, NodalField(system.mesh()), solver, &step1.stats);
  const double mu = system.mu;
  step1.apriori = {mu * l2_norm(*system.matrices, step1.z), std::sqrt(mu) * h1_seminorm(*system.matrices, step1.z),
                   source.l2_norm};
  NodalField u = step1.z;
  return assemble_mode(k, mu, std::move(step1), std::move(u), std::move(basis));
}

}  // namespace fscm
