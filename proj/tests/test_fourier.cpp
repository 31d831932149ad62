#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fscm/errors.hpp"
#include "fscm/integration.hpp"
#include "fscm/manufactured.hpp"

using namespace fscm;
constexpr double kPi = std::numbers::pi;

TEST(Prism, Validation) {
  EXPECT_THROW((PrismSpec{make_l_section(), 0.0}.validate()), InvalidArgument);
  EXPECT_THROW((PrismSpec{make_l_section(), -1.0}.validate()), InvalidArgument);
  const PrismSpec p{make_l_section(), 2.0};
  EXPECT_NEAR(p.mode_mu(3), 9.0 * kPi * kPi / 4.0, 1e-12);
}

TEST(ModeProjector, RecoversSineCoefficients) {
  const double L = 1.7;
  const ModeProjector proj(L, 8);
  const std::array<double, 8> a{0.3, -1.0, 0.0, 2.5, 0.0, 0.0, 1e-3, -0.4};
  std::vector<double> out(8);
  proj.project([&](Point2 x, double x3) {
    double s = 0.0;
    for (int k = 1; k <= 8; ++k) s += a[k - 1] * std::sin(k * kPi * x3 / L);
    return (1.0 + x.x) * s;
  }, Point2{0.5, 0.0}, out);
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(out[k], 1.5 * a[k], 1e-13);
  EXPECT_THROW(ModeProjector(L, 0), InvalidArgument);
}

TEST(ModeProjector, MatchesClosedFormCoefficients) {
  const PrismSpec prism{make_l_section(), 0.8};
  const auto problem = problem_algebraic3d(prism);
  const ModeProjector proj(prism.length, 9);
  std::vector<double> out(9);
  proj.project([&](Point2, double x3) { return problem.exact.terms[0].profile(x3); }, Point2{}, out);
  for (int k = 1; k <= 9; ++k) EXPECT_NEAR(out[k - 1], problem.exact.coefficient(0, k), 1e-13);
}

TEST(Fscm, ThreadCountDoesNotChangeResults) {
  const PrismSpec prism{make_l_section(), 1.0};
  const auto problem = problem_singular3d(prism);
  FscmOptions one;
  FscmOptions four;
  four.threads = 4;
  const FscmSolution a = fscm_solve(prism, problem.f, 8, 6, one);
  const FscmSolution b = fscm_solve(prism, problem.f, 8, 6, four);
  ASSERT_EQ(a.mode_count(), 6);
  for (int k = 0; k < 6; ++k) {
    EXPECT_EQ(a.modes[k].c, b.modes[k].c);
    EXPECT_EQ(a.modes[k].k, k + 1);
    for (std::size_t j = 0; j < a.modes[k].p1_part.size(); ++j) {
      ASSERT_EQ(a.modes[k].p1_part[j], b.modes[k].p1_part[j]);
    }
  }
}

TEST(Fscm, ThresholdByMode) {
  const PrismSpec prism{make_l_section(), 1.0};
  const auto problem = problem_singular3d(prism);
  const FscmSolution sol = fscm_solve(prism, problem.f, 16, 5);
  const double kt = mode_threshold(ScmConfig{}, prism, sol.basis->mesh()->h());
  std::size_t count = 0;
  for (const ModeSolution& m : sol.modes) {
    EXPECT_EQ(m.threshold_applied, m.k >= kt) << m.k;
    if (m.threshold_applied) {
      EXPECT_EQ(m.c, 0.0);
      ++count;
    }
    EXPECT_TRUE(m.apriori.holds());
  }
  EXPECT_EQ(sol.threshold_count(), count);
  // Only modes 1 and 2 carry data.
  for (int k = 3; k <= 5; ++k) EXPECT_LT(std::abs(sol.modes[k - 1].apriori.f_norm), 1e-12);
}

TEST(Fscm, EvaluationOnThePrism) {
  const PrismSpec prism{make_l_section(), 2.0};
  const auto problem = problem_singular3d(prism);
  const FscmSolution sol = fscm_solve(prism, problem.f, 16, 2);
  EXPECT_NEAR(sol.evaluate({-0.3, 0.4}, 0.0), 0.0, 1e-14);
  EXPECT_NEAR(sol.evaluate({-0.3, 0.4}, 2.0), 0.0, 1e-12);
  EXPECT_NEAR(sol.evaluate({0.5, 0.0}, 0.7), 0.0, 1e-12);
  const Point2 x{-0.2, 0.1};
  EXPECT_NEAR(sol.evaluate(x, 0.6), problem.exact.value(x, 0.6), 0.05);
  EXPECT_THROW(sol.evaluate(x, 2.5), OutsideDomain);
  EXPECT_THROW(sol.evaluate({0.5, -0.5}, 1.0), OutsideDomain);
  EXPECT_THROW(fscm_solve(prism, problem.f, 8, 0), InvalidArgument);
}

TEST(Fscm, ModewiseErrorMatchesDirectIntegration) {
  const PrismSpec prism{make_l_section(), 1.0};
  const auto problem = problem_singular3d(prism);
  const FscmSolution sol = fscm_solve(prism, problem.f, 8, 2);
  const H1Error3D err = h1_error_3d(sol, problem.exact);
  EXPECT_NEAR(err.tail, 0.0, 1e-14);

  // Tensor quadrature: corner-aware rule on the section times Gauss in x3.
  const SingularBasis& b = *sol.basis;
  const GaussRule& g = gauss_legendre(12);
  double sum = 0.0;
  for_each_quadrature_point(*b.mesh(), b.rule, [&](std::size_t, const std::array<double, 3>&, Point2 p, double w) {
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double x3 = g.nodes[q] * prism.length;
      const auto ge = problem.exact.gradient(p, x3);
      const auto gh = sol.gradient(p, x3);
      double d = 0.0;
      for (int i = 0; i < 3; ++i) d += (ge[i] - gh[i]) * (ge[i] - gh[i]);
      sum += w * g.weights[q] * prism.length * d;
    }
  });
  EXPECT_NEAR(err.total, std::sqrt(sum), 1e-8 * std::sqrt(sum));
}

TEST(Fscm, TruncationTailOfAlgebraicProblem) {
  const PrismSpec prism{make_l_section(), 1.0};
  const auto problem = problem_algebraic3d(prism);
  const SingularBasisPtr basis = build_singular_basis(assemble(triangulate(prism.section, 8), 0.0).matrices,
                                                      prism.section);
  const FscmSolution s1 = fscm_solve(prism, problem.f, basis, 1);
  const FscmSolution s3 = fscm_solve(prism, problem.f, basis, 3);
  const H1Error3D e1 = h1_error_3d(s1, problem.exact);
  const H1Error3D e3 = h1_error_3d(s3, problem.exact);
  EXPECT_GT(e1.tail, e3.tail);
  EXPECT_GT(e3.tail, 0.0);
  EXPECT_NEAR(e1.mode_a_errors[0], e3.mode_a_errors[0], 1e-12);
}
