// fscm: command line front end for meshing, singular-basis studies, 2D and
// 3D solves and convergence runs.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fscm/config.hpp"
#include "fscm/convergence.hpp"
#include "fscm/errors.hpp"

namespace {

using namespace fscm;
using nlohmann::json;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << std::setprecision(12);
  return out;
}

int cmd_mesh(int n, const std::string& path) {
  const MeshPtr mesh = triangulate(make_l_section(), n);
  std::ofstream out = open_output(path);
  write_mesh(out, *mesh);
  std::cout << json{{"n", n},
                    {"h", mesh->h()},
                    {"vertices", mesh->vertex_count()},
                    {"triangles", mesh->triangle_count()},
                    {"min_angle_deg", mesh->min_angle() * 180.0 / std::numbers::pi},
                    {"out", path}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_singular(int n, const ConvergenceSettings& s) {
  const PolygonalSection section = make_l_section();
  std::vector<int> ns;
  for (int m = std::min(n, 8); m <= n; m *= 2) ns.push_back(m);
  if (ns.back() != n) ns.push_back(n);

  std::vector<SingularBasisPtr> bases;
  for (int m : ns) bases.push_back(build_singular_basis(assemble(triangulate(section, m), 0.0).matrices, section, s.basis));

  std::cout << std::setprecision(12) << "n,h,beta_star,ps_norm_sq,ps_h1_diff,phis_h1_diff,beta_diff\n";
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const SingularBasis& b = *bases[i];
    std::cout << ns[i] << ',' << b.mesh()->h() << ',' << b.beta_star << ',' << b.ps_norm_sq;
    if (i + 1 < bases.size()) {
      const BasisDifference d = basis_difference(b, *bases[i + 1]);
      std::cout << ',' << d.ps_h1 << ',' << d.phis_h1 << ',' << d.beta << '\n';
    } else {
      std::cout << ",,,\n";
    }
  }
  return 0;
}

int cmd_solve2d(int n, double mu, const std::string& problem_name, const ConvergenceSettings& s) {
  const PolygonalSection section = make_l_section();
  const FemSystem system = assemble(triangulate(section, n), mu);
  const SingularBasisPtr basis = build_singular_basis(system.matrices, section, s.basis);
  ManufacturedProblem2D problem;
  if (problem_name == "regular") {
    problem = problem_regular2d(mu);
  } else if (problem_name == "singular") {
    problem = problem_singular2d(section, mu, basis->beta_star, s.r0);
  } else {
    throw InvalidArgument("unknown problem '" + problem_name + "' (regular|singular)");
  }
  const ModeSolution sol = solve_mode(system, make_source(*basis, problem.f), basis, s.scm);
  const ErrorNorms err = a_norm_error(sol, problem);

  json out{{"problem", problem.name},
           {"n", n},
           {"h", system.mesh()->h()},
           {"mu", mu},
           {"c_star", s.scm.c_star},
           {"alpha0", s.scm.alpha0},
           {"threshold_sqrt_mu", threshold_sqrt_mu(s.scm, system.mesh()->h())},
           {"threshold_applied", sol.threshold_applied},
           {"cH", sol.c},
           {"beta_star_h", basis->beta_star},
           {"a_error", err.a_norm},
           {"h1_error", err.h1},
           {"l2_error", err.l2},
           {"apriori",
            {{"mu_l2", sol.apriori.mu_l2},
             {"sqrt_mu_h1", sol.apriori.sqrt_mu_h1},
             {"f_norm", sol.apriori.f_norm},
             {"holds", sol.apriori.holds()}}}};
  if (problem.c_exact) out["c_exact"] = *problem.c_exact;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_solve3d(int n, int modes, double length, const std::string& problem_name, const std::string& path,
                const ConvergenceSettings& s) {
  const PrismSpec prism{make_l_section(), length};
  ManufacturedProblem3D problem;
  if (problem_name == "singular3d") {
    problem = problem_singular3d(prism, s.r0);
  } else if (problem_name == "algebraic3d") {
    problem = problem_algebraic3d(prism);
  } else {
    throw InvalidArgument("unknown problem '" + problem_name + "' (singular3d|algebraic3d)");
  }
  FscmOptions opts;
  opts.scm = s.scm;
  opts.basis = s.basis;
  opts.threads = s.threads;
  const FscmSolution sol = fscm_solve(prism, problem.f, n, modes, opts);
  const H1Error3D err = h1_error_3d(sol, problem.exact);

  std::ofstream out = open_output(path);
  out << "k,mu,cH,thresholdApplied,mode_a_error\n";
  for (const ModeSolution& m : sol.modes) {
    out << m.k << ',' << m.mu << ',' << m.c << ',' << (m.threshold_applied ? 1 : 0) << ','
        << err.mode_a_errors[static_cast<std::size_t>(m.k - 1)] << '\n';
  }
  std::cout << json{{"problem", problem.name},
                    {"n", n},
                    {"N", modes},
                    {"L", length},
                    {"h1_error", err.total},
                    {"tail", err.tail},
                    {"threshold_modes", sol.threshold_count()},
                    {"out", path}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_converge(const std::string& suite_name, int levels, int base_n, const std::string& path,
                 ConvergenceSettings s) {
  s.levels = levels;
  s.base_n = base_n;
  const RateReport report = run_convergence(parse_suite(suite_name), s);
  std::ofstream out = open_output(path);
  out << "level,h,N,a_error,h1_error,cH,slope_running\n";
  for (const RateRow& r : report.rows) {
    out << r.level << ',' << r.h << ',' << r.N << ',' << r.a_error << ',' << r.h1_error << ',' << r.c << ',';
    if (!std::isnan(r.slope_running)) out << r.slope_running;
    out << '\n';
  }
  std::cout << json{{"suite", report.suite},
                    {"slope", report.slope},
                    {"h1_slope", report.h1_slope},
                    {"seed", report.seed},
                    {"residual_check", report.residual_check},
                    {"apriori_ok", report.apriori_ok()},
                    {"out", path}}
                   .dump()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier singular complement method on prisms with an L-shaped section"};
  app.require_subcommand(1);

  std::string config_path;
  int threads = 1;
  app.add_option("--config", config_path, "key = value settings file")->check(CLI::ExistingFile);
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  int n = 16;
  std::string out_path;

  auto* mesh = app.add_subcommand("mesh", "write the structured L-shape mesh");
  mesh->add_option("--n", n, "cells per unit length")->required()->check(CLI::PositiveNumber);
  mesh->add_option("--out", out_path, "output path")->required();

  auto* singular = app.add_subcommand("singular", "beta*_h, ||p_s^h||^2 and self-convergence as CSV");
  singular->add_option("--n", n, "finest mesh")->required()->check(CLI::PositiveNumber);

  double mu = std::numbers::pi * std::numbers::pi;
  std::string problem = "singular";
  auto* solve2d = app.add_subcommand("solve2d", "one SCM solve on a manufactured problem (JSON)");
  solve2d->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  solve2d->add_option("--mu", mu)->check(CLI::NonNegativeNumber);
  solve2d->add_option("--problem", problem, "regular|singular");

  int modes = 4;
  double length = 1.0;
  std::string problem3d = "singular3d";
  auto* solve3d = app.add_subcommand("solve3d", "FSCM solve on a prism, per-mode CSV");
  solve3d->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  solve3d->add_option("--modes", modes)->required()->check(CLI::PositiveNumber);
  solve3d->add_option("--L", length)->check(CLI::PositiveNumber);
  solve3d->add_option("--problem", problem3d, "singular3d|algebraic3d");
  solve3d->add_option("--out", out_path)->required();

  std::string suite;
  int levels = 4;
  int base_n = 8;
  auto* converge = app.add_subcommand("converge", "refinement study, CSV per level");
  converge->add_option("--suite", suite)->required()->check(CLI::IsMember({"scm2d", "fem2d", "fscm3d"}));
  converge->add_option("--levels", levels)->check(CLI::Range(3, 8));
  converge->add_option("--base-n", base_n)->check(CLI::PositiveNumber);
  converge->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    ConvergenceSettings settings;
    if (!config_path.empty()) apply_config(Config::load(config_path), settings);
    if (app.count("--threads") > 0) settings.threads = threads;

    if (*mesh) return cmd_mesh(n, out_path);
    if (*singular) return cmd_singular(n, settings);
    if (*solve2d) return cmd_solve2d(n, solve2d->count("--mu") > 0 ? mu : settings.mu, problem, settings);
    if (*solve3d) {
      if (solve3d->count("--L") == 0) length = settings.length;
      return cmd_solve3d(n, modes, length, problem3d, out_path, settings);
    }
    if (*converge) return cmd_converge(suite, levels, base_n, out_path, settings);
  } catch (const std::exception& e) {
    std::cerr << "fscm: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
