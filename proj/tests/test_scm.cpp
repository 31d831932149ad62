#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fscm/errors.hpp"
#include "fscm/manufactured.hpp"
#include "fscm/scm.hpp"

using namespace fscm;

namespace {

struct ModeCase {
  PolygonalSection section = make_l_section();
  FemSystem system;
  SingularBasisPtr basis;

  ModeCase(int n, double mu) {
    system = assemble(triangulate(section, n), mu);
    basis = build_singular_basis(system.matrices, section);
  }
};

// Independent (z, p_s^h): mass matrix for the P1 part, tabulated p_P integrals for the rest.
double z_dot_ps(const NodalField& z, const SingularBasis& b) {
  double s = b.matrices->mass_form(z.values(), b.p_tilde.values());
  for (std::size_t j = 0; j < z.size(); ++j) s += z[j] * b.pP_load[j];
  return s;
}

}  // namespace

TEST(Scm, ConfigValidation) {
  const double a = 2.0 / 3.0;
  EXPECT_NO_THROW(ScmConfig{}.validate(a));
  EXPECT_THROW((ScmConfig{0.0, 0.55}.validate(a)), InvalidArgument);
  EXPECT_THROW((ScmConfig{1.0, 0.5}.validate(a)), InvalidArgument);
  EXPECT_THROW((ScmConfig{1.0, 0.7}.validate(a)), InvalidArgument);
}

TEST(Scm, ThresholdArithmetic) {
  const ScmConfig cfg{2.0, 0.6};
  const double h = std::sqrt(2.0) / 16.0;
  const double t = threshold_sqrt_mu(cfg, h);
  EXPECT_NEAR(t, 2.0 * std::pow(h, -1.0 / 1.4), 1e-12);
  EXPECT_FALSE(threshold_applies(cfg, h, t * t * (1.0 - 1e-12)));
  EXPECT_TRUE(threshold_applies(cfg, h, t * t * (1.0 + 1e-12)));
}

TEST(Scm, CoefficientFormulaAndThresholdFlip) {
  ModeCase s(16, 1.0);
  const ScmConfig cfg;
  const double t = threshold_sqrt_mu(cfg, s.system.mesh()->h());
  for (double factor : {0.5, 0.999, 1.001, 2.0}) {
    const double mu = factor * factor * t * t;
    const FemSystem sys = s.system.with_mu(mu);
    const ModeSource src = make_source(*s.basis, problem_singular2d(s.section, mu).f);
    const Step1Result r = scm_step1(sys, src, *s.basis, cfg);
    if (factor < 1.0) {
      EXPECT_FALSE(r.threshold_applied);
      const double expect = (src.ps_product - mu * z_dot_ps(r.z, *s.basis)) / s.basis->ps_norm_sq;
      EXPECT_NEAR(r.c, expect, 1e-12 * std::abs(expect));
      EXPECT_NE(r.c, 0.0);
    } else {
      EXPECT_TRUE(r.threshold_applied);
      EXPECT_EQ(r.c, 0.0);
    }
  }
}

TEST(Scm, StepTwoSolvesReducedProblem) {
  ModeCase s(12, 4.0);
  const auto problem = problem_singular2d(s.section, 4.0);
  const ModeSource src = make_source(*s.basis, problem.f);
  const ModeSolution sol = solve_mode(s.system, src, s.basis, {});
  ASSERT_NE(sol.c, 0.0);
  // a_mu(u~ + c phi~, v) + c beta a_mu(phi_P, v) = (f, v) for interior v.
  std::vector<double> a_p1(sol.p1_part.size());
  s.system.matrices->apply(4.0, sol.p1_part.values(), a_p1);
  for (std::size_t i = 0; i < s.system.mesh()->interior_count(); ++i) {
    const double lhs = a_p1[i] + sol.singular_weight * (s.basis->phiP_stiffness[i] + 4.0 * s.basis->phiP_mass[i]);
    EXPECT_NEAR(lhs, src.load[i], 1e-8);
  }
  EXPECT_DOUBLE_EQ(sol.singular_weight, sol.c * s.basis->beta_star);
}

TEST(Scm, Homogeneity) {
  ModeCase s(8, 2.0);
  const auto problem = problem_singular2d(s.section, 2.0);
  const ModeSolution a = solve_mode(s.system, make_source(*s.basis, problem.f), s.basis, {});
  const ModeSolution b = solve_mode(s.system, make_source(*s.basis, [&](Point2 p) { return -3.0 * problem.f(p); }),
                                    s.basis, {});
  EXPECT_NEAR(b.c, -3.0 * a.c, 1e-9 * std::abs(a.c));
  for (std::size_t j = 0; j < a.p1_part.size(); ++j) EXPECT_NEAR(b.p1_part[j], -3.0 * a.p1_part[j], 1e-8);
}

TEST(Scm, RegularProblemHasSmallCoefficient) {
  double prev = 1e300;
  for (int n : {8, 16, 32}) {
    ModeCase s(n, 1.0);
    const auto problem = problem_regular2d(1.0);
    const ModeSolution sol = solve_mode(s.system, make_source(*s.basis, problem.f), s.basis, {});
    EXPECT_LT(std::abs(sol.c), 2.0 * s.system.mesh()->h());
    EXPECT_LT(std::abs(sol.c), prev);
    prev = std::abs(sol.c);
  }
}

TEST(Scm, AprioriBoundsHold) {
  for (double mu : {0.5, 10.0, 400.0}) {
    ModeCase s(12, mu);
    const auto problem = problem_singular2d(s.section, mu);
    const ModeSolution sol = solve_mode(s.system, make_source(*s.basis, problem.f), s.basis, {});
    EXPECT_TRUE(sol.apriori.holds()) << mu;
    EXPECT_GT(sol.apriori.f_norm, 0.0);
  }
}

TEST(Scm, ThresholdReducesToPlainFem) {
  ModeCase s(8, 1e4);
  const auto problem = problem_singular2d(s.section, 1e4);
  const ModeSource src = make_source(*s.basis, problem.f);
  const ModeSolution scm = solve_mode(s.system, src, s.basis, {});
  const ModeSolution fem = solve_plain_fem(s.system, src, s.basis);
  EXPECT_TRUE(scm.threshold_applied);
  EXPECT_EQ(scm.c, 0.0);
  for (std::size_t j = 0; j < scm.p1_part.size(); ++j) EXPECT_EQ(scm.p1_part[j], fem.p1_part[j]);
}

TEST(Scm, NodalAndCallbackSourcesAgreeForP1Data) {
  ModeCase s(8, 1.0);
  NodalField f(s.system.mesh());
  for (std::size_t v = 0; v < f.size(); ++v) f[v] = 1.0 + s.system.mesh()->points()[v].x;
  const ModeSource a = make_source(*s.basis, f);
  const ModeSource b = make_source(*s.basis, [](Point2 p) { return 1.0 + p.x; });
  EXPECT_NEAR(a.ps_product, b.ps_product, 1e-10);
  EXPECT_NEAR(a.l2_norm, b.l2_norm, 1e-12);
}

TEST(Scm, ModeSolutionEvaluation) {
  ModeCase s(8, 1.0);
  const auto problem = problem_singular2d(s.section, 1.0);
  const ModeSolution sol = solve_mode(s.system, make_source(*s.basis, problem.f), s.basis, {});
  EXPECT_NEAR(sol.evaluate({0.0, 0.0}), 0.0, 1e-12);
  EXPECT_NEAR(sol.evaluate({1.0, 0.5}), 0.0, 1e-12);
  EXPECT_THROW(sol.gradient({0.0, 0.0}), CornerSingularity);
  EXPECT_THROW(sol.evaluate({0.5, -0.5}), OutsideDomain);
  // Near the corner the solution follows c beta rho^alpha sin(alpha phi).
  const Point2 p{-0.01, 0.01};
  EXPECT_NEAR(sol.evaluate(p) / problem.u(p), 1.0, 0.3);
}
