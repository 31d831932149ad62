#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fscm/config.hpp"
#include "fscm/convergence.hpp"
#include "fscm/errors.hpp"

using namespace fscm;

TEST(Rates, SlopeOfPowerLaw) {
  const std::vector<double> h{0.4, 0.2, 0.1, 0.05};
  std::vector<double> e;
  for (double v : h) e.push_back(3.0 * std::pow(v, 1.3));
  EXPECT_NEAR(least_squares_slope(h, e), 1.3, 1e-12);
  const auto run = running_slopes(h, e);
  EXPECT_TRUE(std::isnan(run[0]));
  for (std::size_t i = 1; i < run.size(); ++i) EXPECT_NEAR(run[i], 1.3, 1e-12);
  EXPECT_THROW(least_squares_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), InvalidArgument);
  EXPECT_THROW(least_squares_slope(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 0.0}), InvalidArgument);
}

TEST(Rates, SuiteNames) {
  EXPECT_EQ(parse_suite("scm2d"), Suite::Scm2d);
  EXPECT_EQ(to_string(parse_suite("fscm3d")), "fscm3d");
  EXPECT_THROW(parse_suite("scm3d"), InvalidArgument);
}

TEST(Rates, NeedsThreeLevels) {
  ConvergenceSettings s;
  s.levels = 2;
  EXPECT_THROW(run_convergence(Suite::Scm2d, s), InvalidArgument);
  const std::vector<int> two{1, 2};
  EXPECT_THROW(run_mode_sweep(8, two, s), InvalidArgument);
  const std::vector<int> unordered{1, 3, 2};
  EXPECT_THROW(run_mode_sweep(8, unordered, s), InvalidArgument);
}

TEST(Rates, DeterministicAcrossThreadCounts) {
  ConvergenceSettings s;
  s.base_n = 4;
  s.levels = 3;
  const RateReport a = run_convergence(Suite::Scm2d, s);
  s.threads = 3;
  const RateReport b = run_convergence(Suite::Scm2d, s);
  ASSERT_EQ(a.rows.size(), 3u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].a_error, b.rows[i].a_error);
    EXPECT_EQ(a.rows[i].c, b.rows[i].c);
    EXPECT_EQ(a.rows[i].level, static_cast<int>(i));
  }
  EXPECT_EQ(a.slope, b.slope);
  EXPECT_TRUE(a.apriori_ok());
  EXPECT_EQ(a.seed, s.seed);
  EXPECT_LT(a.residual_check, 1e-5);
}

TEST(Rates, SolverFailuresAreAggregated) {
  ConvergenceSettings s;
  s.base_n = 4;
  s.levels = 3;
  s.scm.solver.iteration_cap_factor = 0;
  s.basis.solver.iteration_cap_factor = 0;
  try {
    run_convergence(Suite::Fem2d, s);
    FAIL() << "expected failure";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("level 0"), std::string::npos);
    EXPECT_NE(msg.find("level 2"), std::string::npos);
  }
}

TEST(Prolongation, ExactForP1Fields) {
  const MeshPtr coarse = triangulate(make_l_section(), 4);
  const MeshPtr fine = triangulate(make_l_section(), 8);
  NodalField c(coarse);
  for (std::size_t v = 0; v < c.size(); ++v) {
    const Point2 p = coarse->points()[v];
    c[v] = std::sin(3.0 * p.x) + p.y * p.y;
  }
  const NodalField f = prolongate(c, fine);
  const FemMatrices mc(coarse), mf(fine);
  // Nested spaces: norms are preserved.
  EXPECT_NEAR(h1_seminorm(mf, f), h1_seminorm(mc, c), 1e-12);
  EXPECT_NEAR(l2_norm(mf, f), l2_norm(mc, c), 1e-12);
}

TEST(Prolongation, BasisDifferenceOfIdenticalMeshesIsZero) {
  const PolygonalSection s = make_l_section();
  const SingularBasisPtr b = build_singular_basis(assemble(triangulate(s, 8), 0.0).matrices, s);
  const BasisDifference d = basis_difference(*b, *b);
  EXPECT_NEAR(d.ps_h1, 0.0, 1e-12);
  EXPECT_NEAR(d.phis_h1, 0.0, 1e-7);
  EXPECT_EQ(d.beta, 0.0);
}

TEST(Prolongation, BetaExtrapolation) {
  // Exact for beta_h = b + C h^{2 alpha0}.
  const double a0 = 0.55;
  auto beta = [&](double h) { return 0.63 + 0.2 * std::pow(h, 2 * a0); };
  EXPECT_NEAR(extrapolate_beta_star(beta(0.1), beta(0.05), a0), 0.63, 1e-14);
}

TEST(Config, ParseAndApply) {
  std::istringstream in("# settings\nc_star = 4\n alpha0=0.6 # inline\n\ntolerance = 1e-12\nr0 = 0.3\nthreads = 2\n");
  const Config c = Config::parse(in);
  EXPECT_TRUE(c.has("c_star"));
  ConvergenceSettings s;
  apply_config(c, s);
  EXPECT_EQ(s.scm.c_star, 4.0);
  EXPECT_EQ(s.scm.alpha0, 0.6);
  EXPECT_EQ(s.scm.solver.tolerance, 1e-12);
  EXPECT_EQ(s.basis.solver.tolerance, 1e-12);
  EXPECT_EQ(s.r0, 0.3);
  EXPECT_EQ(s.threads, 2);
}

TEST(Config, Errors) {
  std::istringstream no_eq("c_star 4\n");
  EXPECT_THROW(Config::parse(no_eq), InvalidArgument);
  std::istringstream unknown("speed = 3\n");
  ConvergenceSettings s;
  EXPECT_THROW(apply_config(Config::parse(unknown), s), InvalidArgument);
  std::istringstream bad_value("c_star = four\n");
  EXPECT_THROW(apply_config(Config::parse(bad_value), s), InvalidArgument);
  std::istringstream bad_alpha("alpha0 = 0.7\n");
  EXPECT_THROW(apply_config(Config::parse(bad_alpha), s), InvalidArgument);
  EXPECT_THROW(Config::load("/nonexistent/fscm.cfg"), InvalidArgument);
}
