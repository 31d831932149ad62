#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fscm/errors.hpp"
#include "fscm/fem.hpp"
#include "fscm/pcg.hpp"
#include "support.hpp"

using namespace fscm;

TEST(Fem, ElementMatrices) {
  const std::array<Point2, 3> tri{Point2{0.1, 0.2}, Point2{0.9, 0.3}, Point2{0.4, 1.0}};
  const ElementMatrices em = element_matrices(tri);
  const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
  double mass_sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    double row = 0.0;
    for (int j = 0; j < 3; ++j) {
      row += em.stiffness[i][j];
      mass_sum += em.mass[i][j];
      EXPECT_DOUBLE_EQ(em.stiffness[i][j], em.stiffness[j][i]);
      EXPECT_NEAR(em.mass[i][j], area / 12.0 * (i == j ? 2.0 : 1.0), 1e-15);
    }
    EXPECT_NEAR(row, 0.0, 1e-14);
  }
  EXPECT_NEAR(mass_sum, area, 1e-15);
  // Reference right triangle: K = 1/2 [[2,-1,-1],[-1,1,0],[-1,0,1]].
  const ElementMatrices r = element_matrices({Point2{0, 0}, Point2{1, 0}, Point2{0, 1}});
  EXPECT_NEAR(r.stiffness[0][0], 1.0, 1e-15);
  EXPECT_NEAR(r.stiffness[1][2], 0.0, 1e-15);
  EXPECT_NEAR(r.stiffness[0][1], -0.5, 1e-15);
  EXPECT_THROW(element_matrices({Point2{0, 0}, Point2{1, 0}, Point2{2, 0}}), DegenerateTriangle);
}

TEST(Fem, GlobalMatricesInvariants) {
  const MeshPtr mesh = triangulate(make_l_section(), 6);
  const FemMatrices m(mesh);
  const std::size_t V = mesh->vertex_count();
  std::vector<double> ones(V, 1.0), y(V);
  m.apply(0.0, ones, y);
  for (double v : y) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_NEAR(m.mass_form(ones, ones), 3.0, 1e-12);
  // Symmetry of both matrices.
  for (std::size_t i = 0; i < V; i += 7) {
    for (std::size_t j = 0; j < V; j += 5) {
      EXPECT_DOUBLE_EQ(m.stiffness_at(i, j), m.stiffness_at(j, i));
      EXPECT_DOUBLE_EQ(m.mass_at(i, j), m.mass_at(j, i));
    }
  }
  // |x|_1^2 of the nodal interpolant of x is the area.
  NodalField x(mesh);
  for (std::size_t v = 0; v < V; ++v) x[v] = mesh->points()[v].x;
  EXPECT_NEAR(h1_seminorm(m, x), std::sqrt(3.0), 1e-12);
}

TEST(Fem, InteriorAndCouplingSplitTheFullOperator) {
  const MeshPtr mesh = triangulate(make_l_section(), 5);
  const FemMatrices m(mesh);
  const std::size_t V = mesh->vertex_count();
  const std::size_t I = mesh->interior_count();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(V), full(V), yi(I), yc(I);
  for (double& v : x) v = u(rng);
  m.apply(2.5, x, full);
  m.apply_interior(2.5, std::span<const double>(x).first(I), yi);
  m.apply_coupling(2.5, x, yc);
  for (std::size_t i = 0; i < I; ++i) EXPECT_NEAR(yi[i] + yc[i], full[i], 1e-12);
  const auto d = m.interior_diagonal(2.5);
  for (std::size_t i = 0; i < I; ++i) EXPECT_DOUBLE_EQ(d[i], m.stiffness_at(i, i) + 2.5 * m.mass_at(i, i));
}

TEST(Fem, PcgLinearityAndAccuracy) {
  // Tridiagonal SPD operator.
  const std::size_t n = 40;
  auto apply = [n](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = 3.0 * x[i] - (i > 0 ? x[i - 1] : 0.0) - (i + 1 < n ? x[i + 1] : 0.0);
    }
  };
  std::vector<double> dinv(n, 1.0 / 3.0), b1(n), b2(n), b12(n), x1(n), x2(n), x12(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    b1[i] = std::sin(0.3 * i);
    b2[i] = 1.0 / (1.0 + i);
    b12[i] = 2.0 * b1[i] - 3.0 * b2[i];
  }
  for (auto [b, x] : {std::pair{&b1, &x1}, std::pair{&b2, &x2}, std::pair{&b12, &x12}}) {
    const PcgResult res = pcg_solve(apply, dinv, *b, *x, 1e-13, 200);
    EXPECT_TRUE(res.converged);
    apply(*x, r);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r[i], (*b)[i], 1e-11);
  }
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x12[i], 2.0 * x1[i] - 3.0 * x2[i], 1e-11);
  std::vector<double> zero(n, 0.0), xz(n, 5.0);
  EXPECT_TRUE(pcg_solve(apply, dinv, zero, xz, 1e-12, 10).converged);
  for (double v : xz) EXPECT_EQ(v, 0.0);
}

TEST(Fem, LinearSolutionIsReproduced) {
  // Convex sub-rectangle [0,1]^2 of the L-shape.
  const MeshPtr mesh = test::rectangle_mesh(0.0, 1.0, 0.0, 1.0, 16, 12);
  auto lin = [](Point2 p) { return 1.0 + 2.0 * p.x - 3.0 * p.y; };
  for (double mu : {0.0, 7.0}) {
    const FemSystem sys = assemble(mesh, mu);
    NodalField g(mesh);
    for (std::size_t v = 0; v < mesh->vertex_count(); ++v) g[v] = mesh->is_boundary(v) ? lin(mesh->points()[v]) : 0.0;
    const NodalField rhs = load_vector(mesh, [&](Point2 p) { return mu * lin(p); });
    SolveStats stats;
    const NodalField u = solve(sys, rhs, g, {}, &stats);
    double err = 0.0;
    for (std::size_t v = 0; v < mesh->vertex_count(); ++v) err = std::max(err, std::abs(u[v] - lin(mesh->points()[v])));
    EXPECT_LE(err, 1e-9) << "mu=" << mu;
    for (double r : galerkin_residual(sys, u, rhs)) EXPECT_NEAR(r, 0.0, 1e-9);
    EXPECT_GT(stats.iterations, 0);
  }
}

TEST(Fem, NodalLoadIsMassProduct) {
  const MeshPtr mesh = triangulate(make_l_section(), 4);
  const FemMatrices m(mesh);
  NodalField f(mesh);
  for (std::size_t v = 0; v < f.size(); ++v) f[v] = mesh->points()[v].x - 2.0 * mesh->points()[v].y;
  const NodalField a = load_vector(m, f);
  const NodalField b = load_vector(mesh, [](Point2 p) { return p.x - 2.0 * p.y; });
  for (std::size_t v = 0; v < f.size(); ++v) EXPECT_NEAR(a[v], b[v], 1e-14);
}

TEST(Fem, NodalFieldEvaluation) {
  const MeshPtr mesh = triangulate(make_l_section(), 4);
  NodalField f(mesh);
  for (std::size_t v = 0; v < f.size(); ++v) f[v] = 0.5 + mesh->points()[v].x * 2.0 + mesh->points()[v].y;
  EXPECT_NEAR(f.evaluate({-0.37, 0.81}), 0.5 - 0.74 + 0.81, 1e-14);
  const auto loc = mesh->locate({0.3, 0.3});
  ASSERT_TRUE(loc);
  const Point2 g = f.gradient_in(loc->triangle);
  EXPECT_NEAR(g.x, 2.0, 1e-13);
  EXPECT_NEAR(g.y, 1.0, 1e-13);
  EXPECT_THROW(f.evaluate({0.5, -0.5}), OutsideDomain);
}

TEST(Fem, SolverFailureIsReported) {
  const MeshPtr mesh = triangulate(make_l_section(), 16);
  const FemSystem sys = assemble(mesh, 0.0);
  const NodalField rhs = load_vector(mesh, [](Point2) { return 1.0; });
  SolveOptions tight{1e-14, 0};
  try {
    solve(sys, rhs, NodalField(mesh), tight);
    FAIL() << "expected NoConvergence";
  } catch (const NoConvergence& e) {
    EXPECT_GT(e.residual(), 1e-14);
  }
  EXPECT_THROW(assemble(mesh, -1.0), InvalidArgument);
}
