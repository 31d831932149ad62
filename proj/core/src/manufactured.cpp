#include "fscm/manufactured.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fscm/errors.hpp"
#include "fscm/integration.hpp"

namespace fscm {

namespace {

constexpr double kPi = std::numbers::pi;

double bubble(Point2 p) { return p.x * p.y * (1.0 - p.x * p.x) * (1.0 - p.y * p.y); }

Point2 bubble_gradient(Point2 p) {
  return {(1.0 - 3.0 * p.x * p.x) * p.y * (1.0 - p.y * p.y), p.x * (1.0 - p.x * p.x) * (1.0 - 3.0 * p.y * p.y)};
}

double bubble_laplacian(Point2 p) { return -6.0 * p.x * p.y * (2.0 - p.x * p.x - p.y * p.y); }

// xi(rho) rho^alpha sin(alpha phi) with its gradient and Laplacian.
struct CutSingular {
  PolygonalSection section;
  Cutoff cut;

  double value(Point2 p) const { return cut.value(polar_at(section, p).rho) * eval_phiP(section, p); }

  Point2 gradient(Point2 p) const {
    const PolarCoordinates pc = polar_at(section, p);
    const double xi = cut.value(pc.rho);
    Point2 g = xi * grad_phiP(section, p);
    const double d1 = cut.d1(pc.rho);
    if (d1 != 0.0) {
      const Point2 e_rho = (1.0 / pc.rho) * (p - section.corner());
      g = g + (d1 * eval_phiP(section, p)) * e_rho;
    }
    return g;
  }

  // Delta(xi phi_P) = 2 xi' d_rho phi_P + phi_P (xi'' + xi'/rho), with Delta phi_P = 0.
  double laplacian(Point2 p) const {
    const PolarCoordinates pc = polar_at(section, p);
    const double d1 = cut.d1(pc.rho);
    const double d2 = cut.d2(pc.rho);
    if (d1 == 0.0 && d2 == 0.0) return 0.0;
    const double a = section.alpha();
    const double s = std::sin(a * pc.phi);
    return s * std::pow(pc.rho, a - 1.0) * ((2.0 * a + 1.0) * d1 + pc.rho * d2);
  }
};

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double t = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
  return norm(p - (a + t * d));
}

double boundary_distance(const PolygonalSection& section, Point2 p) {
  double best = norm(p - section.corner());
  for (std::size_t k = 0; k < section.edge_count(); ++k) {
    const auto [a, b] = section.edge(k);
    best = std::min(best, segment_distance(p, a, b));
  }
  return best;
}

std::vector<Point2> sample_points(const PolygonalSection& section, unsigned seed, int count, double margin) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const Point2& v : section.vertices()) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x0, x1);
  std::uniform_real_distribution<double> uy(y0, y1);
  std::vector<Point2> out;
  while (static_cast<int>(out.size()) < count) {
    const Point2 p{ux(rng), uy(rng)};
    if (section.contains(p) && boundary_distance(section, p) >= margin) out.push_back(p);
  }
  return out;
}

// Fourth-order central second difference.
template <typename F>
double second_difference(const F& f, double step) {
  return (-f(2.0 * step) + 16.0 * f(step) - 30.0 * f(0.0) + 16.0 * f(-step) - f(-2.0 * step)) / (12.0 * step * step);
}

constexpr double kStep = 1e-3;
constexpr double kMargin = 0.05;

}  // namespace

double Cutoff::value(double rho) const {
  if (rho <= r0) return 1.0;
  if (rho >= 2.0 * r0) return 0.0;
  const double t = (rho - r0) / r0;
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double Cutoff::d1(double rho) const {
  if (rho <= r0 || rho >= 2.0 * r0) return 0.0;
  const double t = (rho - r0) / r0;
  return -30.0 * t * t * (1.0 - t) * (1.0 - t) / r0;
}

double Cutoff::d2(double rho) const {
  if (rho <= r0 || rho >= 2.0 * r0) return 0.0;
  const double t = (rho - r0) / r0;
  return -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (r0 * r0);
}

ManufacturedProblem2D problem_regular2d(double mu) {
  ManufacturedProblem2D p;
  p.name = "regular2d";
  p.mu = mu;
  p.u = bubble;
  p.grad = bubble_gradient;
  p.f = [mu](Point2 x) { return -bubble_laplacian(x) + mu * bubble(x); };
  p.c_exact = 0.0;
  return p;
}

ManufacturedProblem2D problem_singular2d(const PolygonalSection& section, double mu, double beta_star, double r0) {
  if (!(r0 > 0.0)) throw InvalidArgument("problem_singular2d: r0 must be positive");
  const auto s = std::make_shared<CutSingular>(CutSingular{section, Cutoff{r0}});
  ManufacturedProblem2D p;
  p.name = "singular2d";
  p.mu = mu;
  p.u = [s](Point2 x) { return s->value(x); };
  p.grad = [s](Point2 x) { return s->gradient(x); };
  p.f = [s, mu](Point2 x) { return -s->laplacian(x) + mu * s->value(x); };
  if (beta_star > 0.0) p.c_exact = 1.0 / beta_star;
  return p;
}

ManufacturedProblem3D problem_singular3d(const PrismSpec& prism, double r0) {
  prism.validate();
  const double L = prism.length;
  const auto s = std::make_shared<CutSingular>(CutSingular{prism.section, Cutoff{r0}});

  auto sine_term = [L](int m) {
    const double w = m * kPi / L;
    SeparableTerm t;
    t.profile = [w](double x3) { return std::sin(w * x3); };
    t.profile_d1 = [w](double x3) { return w * std::cos(w * x3); };
    t.profile_d2 = [w](double x3) { return -w * w * std::sin(w * x3); };
    t.sine_coefficient = [m](int k) { return k == m ? 1.0 : 0.0; };
    return t;
  };

  SeparableTerm singular = sine_term(1);
  singular.section = [s](Point2 x) { return s->value(x); };
  singular.section_gradient = [s](Point2 x) { return s->gradient(x); };
  singular.section_laplacian = [s](Point2 x) { return s->laplacian(x); };

  SeparableTerm smooth = sine_term(2);
  smooth.section = bubble;
  smooth.section_gradient = bubble_gradient;
  smooth.section_laplacian = bubble_laplacian;

  ManufacturedProblem3D p;
  p.name = "singular3d";
  p.exact.length = L;
  p.exact.terms = {singular, smooth};
  p.smooth_in_x3 = true;
  const auto exact = std::make_shared<SeparableField3D>(p.exact);
  p.f = [exact](Point2 x, double x3) { return exact->source(x, x3); };
  return p;
}

ManufacturedProblem3D problem_algebraic3d(const PrismSpec& prism) {
  prism.validate();
  const double L = prism.length;
  SeparableTerm t;
  t.profile = [L](double x3) { return x3 * (L - x3); };
  t.profile_d1 = [L](double x3) { return L - 2.0 * x3; };
  t.profile_d2 = [](double) { return -2.0; };
  // (2/L) int_0^L x (L - x) sin(k pi x / L) dx = 4 L^2 (1 - (-1)^k) / (k pi)^3
  t.sine_coefficient = [L](int k) {
    if (k % 2 == 0) return 0.0;
    const double kp = k * kPi;
    return 8.0 * L * L / (kp * kp * kp);
  };
  t.section = bubble;
  t.section_gradient = bubble_gradient;
  t.section_laplacian = bubble_laplacian;

  ManufacturedProblem3D p;
  p.name = "algebraic3d";
  p.exact.length = L;
  p.exact.terms = {t};
  p.smooth_in_x3 = false;  // f does not vanish on the bases
  const auto exact = std::make_shared<SeparableField3D>(p.exact);
  p.f = [exact](Point2 x, double x3) { return exact->source(x, x3); };
  return p;
}

ResidualCheck check_residual(const ManufacturedProblem2D& problem, const PolygonalSection& section, unsigned seed,
                             int points, double tolerance) {
  ResidualCheck out;
  out.seed = seed;
  out.points = points;
  for (const Point2& p : sample_points(section, seed, points, kMargin)) {
    const double uxx = second_difference([&](double d) { return problem.u(p + Point2{d, 0.0}); }, kStep);
    const double uyy = second_difference([&](double d) { return problem.u(p + Point2{0.0, d}); }, kStep);
    const double f = problem.f(p);
    const double residual = -(uxx + uyy) + problem.mu * problem.u(p) - f;
    out.max_relative = std::max(out.max_relative, std::abs(residual) / (1.0 + std::abs(f)));
  }
  out.passed = out.max_relative <= tolerance;
  return out;
}

ResidualCheck check_residual(const ManufacturedProblem3D& problem, const PrismSpec& prism, unsigned seed, int points,
                             double tolerance) {
  ResidualCheck out;
  out.seed = seed;
  out.points = points;
  const auto xs = sample_points(prism.section, seed, points, kMargin);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> uz(kMargin * prism.length, (1.0 - kMargin) * prism.length);
  const SeparableField3D& u = problem.exact;
  for (const Point2& p : xs) {
    const double z = uz(rng);
    const double uxx = second_difference([&](double d) { return u.value(p + Point2{d, 0.0}, z); }, kStep);
    const double uyy = second_difference([&](double d) { return u.value(p + Point2{0.0, d}, z); }, kStep);
    const double uzz = second_difference([&](double d) { return u.value(p, z + d); }, kStep);
    const double f = problem.f(p, z);
    const double residual = -(uxx + uyy + uzz) - f;
    out.max_relative = std::max(out.max_relative, std::abs(residual) / (1.0 + std::abs(f)));
  }
  out.passed = out.max_relative <= tolerance;
  return out;
}

ErrorNorms a_norm_error(const ModeSolution& uh, const ScalarField2D& u, const std::function<Point2(Point2)>& grad,
                        double mu) {
  if (!uh.basis) throw InvalidArgument("a_norm_error: solution has no singular basis");
  const SingularBasis& basis = *uh.basis;
  double h1_sq = 0.0;
  double l2_sq = 0.0;
  for_each_quadrature_point(*basis.mesh(), basis.rule, [&](std::size_t t, const std::array<double, 3>& bary,
                                                          Point2 p, double w) {
    const double e = u(p) - uh.evaluate_in(t, bary, p);
    const Point2 ge = grad(p) - uh.gradient_in(t, p);
    h1_sq += w * dot(ge, ge);
    l2_sq += w * e * e;
  });
  ErrorNorms out;
  out.h1 = std::sqrt(h1_sq);
  out.l2 = std::sqrt(l2_sq);
  out.a_norm = std::sqrt(h1_sq + mu * l2_sq);
  return out;
}

ErrorNorms a_norm_error(const ModeSolution& uh, const ManufacturedProblem2D& problem) {
  return a_norm_error(uh, problem.u, problem.grad, problem.mu);
}

}  // namespace fscm
