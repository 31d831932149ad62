#include "fscm/convergence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fscm/errors.hpp"
#include "fscm/parallel.hpp"

namespace fscm {

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("least_squares_slope: need two or more pairs");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("least_squares_slope: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(x.size());
  const double den = m * sxx - sx * sx;
  if (den == 0.0) throw InvalidArgument("least_squares_slope: abscissae coincide");
  return (m * sxy - sx * sy) / den;
}

std::vector<double> running_slopes(std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(x.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] > 0.0 && x[i - 1] > 0.0 && y[i] > 0.0 && y[i - 1] > 0.0 && x[i] != x[i - 1]) {
      out[i] = std::log(y[i] / y[i - 1]) / std::log(x[i] / x[i - 1]);
    }
  }
  return out;
}

bool RateReport::apriori_ok() const {
  for (const RateRow& r : rows) {
    if (!r.apriori_ok) return false;
  }
  return true;
}

Suite parse_suite(const std::string& name) {
  if (name == "scm2d") return Suite::Scm2d;
  if (name == "fem2d") return Suite::Fem2d;
  if (name == "fscm3d") return Suite::Fscm3d;
  throw InvalidArgument("unknown suite '" + name + "'");
}

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::Scm2d: return "scm2d";
    case Suite::Fem2d: return "fem2d";
    case Suite::Fscm3d: return "fscm3d";
  }
  return "?";
}

namespace {

void finish(RateReport& report, bool against_modes) {
  std::vector<double> x, a, h1;
  for (const RateRow& r : report.rows) {
    x.push_back(against_modes ? static_cast<double>(r.N) : r.h);
    a.push_back(r.a_error);
    h1.push_back(r.h1_error);
  }
  const auto run = running_slopes(x, a);
  for (std::size_t i = 0; i < report.rows.size(); ++i) report.rows[i].slope_running = run[i];
  if (report.rows.size() >= 2) {
    report.slope = least_squares_slope(x, a);
    report.h1_slope = least_squares_slope(x, h1);
  }
}

// Runs every level, then throws one Error naming all failed levels.
template <typename Body>
void run_levels(int count, int threads, Body&& body) {
  std::vector<std::string> failures(static_cast<std::size_t>(count));
  detail::parallel_for(count, threads, [&](int i) {
    try {
      body(i);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(i)] = e.what();
    }
  });
  std::ostringstream msg;
  bool failed = false;
  for (int i = 0; i < count; ++i) {
    if (failures[static_cast<std::size_t>(i)].empty()) continue;
    msg << (failed ? "; " : "") << "level " << i << ": " << failures[static_cast<std::size_t>(i)];
    failed = true;
  }
  if (failed) throw Error("convergence run failed: " + msg.str());
}

bool modes_apriori_ok(const FscmSolution& sol) {
  for (const ModeSolution& m : sol.modes) {
    if (!m.apriori.holds()) return false;
  }
  return true;
}

}  // namespace

RateReport run_convergence(Suite suite, const ConvergenceSettings& settings) {
  if (settings.levels < 3) throw InvalidArgument("run_convergence: at least three levels are required");
  if (settings.base_n < 2) throw InvalidArgument("run_convergence: base_n must be at least 2");
  const PolygonalSection section = make_l_section();

  RateReport report;
  report.suite = to_string(suite);
  report.seed = settings.seed;
  report.rows.resize(static_cast<std::size_t>(settings.levels));

  if (suite == Suite::Fscm3d) {
    const PrismSpec prism{section, settings.length};
    const ManufacturedProblem3D problem = problem_singular3d(prism, settings.r0);
    const ResidualCheck check = check_residual(problem, prism, settings.seed);
    if (!check.passed) throw Error("run_convergence: manufactured 3D problem fails its residual check");
    report.residual_check = check.max_relative;

    FscmOptions opts;
    opts.scm = settings.scm;
    opts.basis = settings.basis;
    run_levels(settings.levels, settings.threads, [&](int i) {
      const int n = settings.base_n << i;
      const MeshPtr mesh = triangulate(section, n);
      const int N = static_cast<int>(std::ceil(settings.length / mesh->h()));
      const FscmSolution sol = fscm_solve(prism, problem.f, n, N, opts);
      const H1Error3D err = h1_error_3d(sol, problem.exact);
      RateRow& row = report.rows[static_cast<std::size_t>(i)];
      row = {i, mesh->h(), N, err.total, err.total, sol.modes.front().c, 0.0, modes_apriori_ok(sol)};
    });
    for (const RateRow& r : report.rows) report.apriori_checks += r.N;
    finish(report, false);
    return report;
  }

  const ManufacturedProblem2D problem = problem_singular2d(section, settings.mu, 0.0, settings.r0);
  const ResidualCheck check = check_residual(problem, section, settings.seed);
  if (!check.passed) throw Error("run_convergence: manufactured 2D problem fails its residual check");
  report.residual_check = check.max_relative;

  run_levels(settings.levels, settings.threads, [&](int i) {
    const int n = settings.base_n << i;
    const MeshPtr mesh = triangulate(section, n);
    const FemSystem system = assemble(mesh, settings.mu);
    const SingularBasisPtr basis = build_singular_basis(system.matrices, section, settings.basis);
    const ModeSource source = make_source(*basis, problem.f);
    const ModeSolution sol = suite == Suite::Scm2d ? solve_mode(system, source, basis, settings.scm)
                                                   : solve_plain_fem(system, source, basis, settings.scm.solver);
    const ErrorNorms err = a_norm_error(sol, problem);
    const bool ok = sol.apriori.holds();
    report.rows[static_cast<std::size_t>(i)] = {i, mesh->h(), 1, err.a_norm, err.h1, sol.c, 0.0, ok};
  });
  report.apriori_checks = settings.levels;
  finish(report, false);
  return report;
}

RateReport run_mode_sweep(int n, std::span<const int> mode_counts, const ConvergenceSettings& settings) {
  if (mode_counts.size() < 3) throw InvalidArgument("run_mode_sweep: at least three mode counts are required");
  for (std::size_t i = 0; i < mode_counts.size(); ++i) {
    if (mode_counts[i] < 1 || (i > 0 && mode_counts[i] <= mode_counts[i - 1])) {
      throw InvalidArgument("run_mode_sweep: mode counts must be positive and increasing");
    }
  }
  const PrismSpec prism{make_l_section(), settings.length};
  const ManufacturedProblem3D problem = problem_algebraic3d(prism);
  const ResidualCheck check = check_residual(problem, prism, settings.seed);
  if (!check.passed) throw Error("run_mode_sweep: manufactured problem fails its residual check");

  RateReport report;
  report.suite = "modes";
  report.seed = settings.seed;
  report.residual_check = check.max_relative;

  const MeshPtr mesh = triangulate(prism.section, n);
  const FemSystem system = assemble(mesh, 0.0);
  const SingularBasisPtr basis = build_singular_basis(system.matrices, prism.section, settings.basis);
  FscmOptions opts;
  opts.scm = settings.scm;
  opts.basis = settings.basis;
  opts.threads = settings.threads;

  // The largest solve contains every smaller one: mode k does not depend on N
  // once the x3 quadrature is fixed.
  opts.panels = std::max(64, 8 * mode_counts.back());
  FscmSolution full = fscm_solve(prism, problem.f, basis, mode_counts.back(), opts);
  report.apriori_checks = full.mode_count();
  for (std::size_t i = 0; i < mode_counts.size(); ++i) {
    FscmSolution sol{full.prism, full.basis, {}};
    sol.modes.assign(full.modes.begin(), full.modes.begin() + mode_counts[i]);
    const H1Error3D err = h1_error_3d(sol, problem.exact);
    report.rows.push_back(
        {static_cast<int>(i), mesh->h(), mode_counts[i], err.total, err.total, sol.modes.front().c, 0.0,
         modes_apriori_ok(sol)});
  }
  finish(report, true);
  return report;
}

NodalField prolongate(const NodalField& coarse, const MeshPtr& fine) {
  NodalField out(fine);
  const auto& pts = fine->points();
  for (std::size_t v = 0; v < pts.size(); ++v) out[v] = coarse.evaluate(pts[v]);
  return out;
}

BasisDifference basis_difference(const SingularBasis& coarse, const SingularBasis& fine) {
  const MeshPtr& mesh = fine.mesh();
  const FemMatrices& m = *fine.matrices;

  // p_s^H - p_s^h = p~_H - p~_h since p_P cancels.
  NodalField dp = prolongate(coarse.p_tilde, mesh);
  for (std::size_t j = 0; j < dp.size(); ++j) dp[j] -= fine.p_tilde[j];

  // phi_s^H - phi_s^h = (phi~_H - phi~_h) + (beta_H - beta_h) phi_P
  NodalField dphi = prolongate(coarse.phi_tilde, mesh);
  for (std::size_t j = 0; j < dphi.size(); ++j) dphi[j] -= fine.phi_tilde[j];
  const double db = coarse.beta_star - fine.beta_star;
  double cross_term = 0.0;
  for (std::size_t j = 0; j < dphi.size(); ++j) cross_term += dphi[j] * fine.phiP_stiffness[j];
  const double d1 = h1_seminorm(m, dphi);
  const double phis_sq = d1 * d1 + 2.0 * db * cross_term + db * db * fine.phiP_h1_sq;

  BasisDifference out;
  out.ps_h1 = h1_seminorm(m, dp);
  out.ps_l2 = l2_norm(m, dp);
  out.phis_h1 = std::sqrt(std::max(0.0, phis_sq));
  out.beta = std::abs(db);
  return out;
}

double extrapolate_beta_star(double beta_coarse, double beta_fine, double alpha0) {
  const double r = std::pow(2.0, 2.0 * alpha0);
  return beta_fine + (beta_fine - beta_coarse) / (r - 1.0);
}

}  // namespace fscm
