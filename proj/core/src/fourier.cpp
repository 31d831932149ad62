#include "fscm/fourier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fscm/errors.hpp"
#include "fscm/integration.hpp"
#include "fscm/parallel.hpp"

namespace fscm {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

void PrismSpec::validate() const {
  if (!(length > 0.0)) throw InvalidArgument("PrismSpec: L must be positive");
}

double PrismSpec::mode_mu(int k) const {
  const double w = k * kPi / length;
  return w * w;
}

ModeProjector::ModeProjector(double length, int modes, int panels, int points_per_panel) : modes_(modes) {
  if (modes < 1) throw InvalidArgument("ModeProjector: need at least one mode");
  if (!(length > 0.0)) throw InvalidArgument("ModeProjector: L must be positive");
  if (panels <= 0) panels = std::max(64, 8 * modes);
  const GaussRule& g = gauss_legendre(points_per_panel);
  const double width = length / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      nodes_.push_back((p + g.nodes[q]) * width);
      weights_.push_back(2.0 / length * g.weights[q] * width);
    }
  }
  sines_.resize(nodes_.size() * static_cast<std::size_t>(modes));
  for (std::size_t q = 0; q < nodes_.size(); ++q) {
    for (int k = 1; k <= modes; ++k) {
      sines_[q * modes + k - 1] = std::sin(k * kPi * nodes_[q] / length);
    }
  }
}

void ModeProjector::project(const ScalarField3D& f, Point2 x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t m = static_cast<std::size_t>(modes_);
  for (std::size_t q = 0; q < nodes_.size(); ++q) {
    const double fw = weights_[q] * f(x, nodes_[q]);
    const double* s = &sines_[q * m];
    for (std::size_t k = 0; k < m; ++k) out[k] += fw * s[k];
  }
}

NodalField mode_coefficients(const ScalarField3D& f, const PrismSpec& prism, int k, const MeshPtr& mesh) {
  prism.validate();
  if (k < 1) throw InvalidArgument("mode_coefficients: k must be >= 1");
  const ModeProjector proj(prism.length, k);
  std::vector<double> all(static_cast<std::size_t>(k));
  NodalField out(mesh);
  for (std::size_t v = 0; v < mesh->vertex_count(); ++v) {
    proj.project(f, mesh->points()[v], all);
    out[v] = all.back();
  }
  return out;
}

std::size_t FscmSolution::threshold_count() const {
  std::size_t c = 0;
  for (const auto& m : modes) c += m.threshold_applied ? 1 : 0;
  return c;
}

double FscmSolution::evaluate(Point2 x, double x3) const {
  if (x3 < 0.0 || x3 > prism.length) throw OutsideDomain("FscmSolution::evaluate: x3 outside [0, L]");
  const auto loc = basis->mesh()->locate(x);
  if (!loc) throw OutsideDomain("FscmSolution::evaluate: point outside the section");
  const double phiP = eval_phiP(prism.section, x);
  double sum = 0.0;
  for (const ModeSolution& m : modes) {
    const double uk = m.p1_part.evaluate_in(loc->triangle, loc->bary) + m.singular_weight * phiP;
    sum += uk * std::sin(m.k * kPi * x3 / prism.length);
  }
  return sum;
}

std::array<double, 3> FscmSolution::gradient(Point2 x, double x3) const {
  if (x3 < 0.0 || x3 > prism.length) throw OutsideDomain("FscmSolution::gradient: x3 outside [0, L]");
  const auto loc = basis->mesh()->locate(x);
  if (!loc) throw OutsideDomain("FscmSolution::gradient: point outside the section");
  const double phiP = eval_phiP(prism.section, x);
  std::array<double, 3> g{};
  for (const ModeSolution& m : modes) {
    const double w = m.k * kPi / prism.length;
    const double s = std::sin(w * x3);
    const double c = std::cos(w * x3);
    const Point2 grad = m.gradient_in(loc->triangle, x);
    const double uk = m.p1_part.evaluate_in(loc->triangle, loc->bary) + m.singular_weight * phiP;
    g[0] += grad.x * s;
    g[1] += grad.y * s;
    g[2] += uk * w * c;
  }
  return g;
}

double mode_threshold(const ScmConfig& config, const PrismSpec& prism, double h) {
  return threshold_sqrt_mu(config, h) * prism.length / kPi;
}

FscmSolution fscm_solve(const PrismSpec& prism, const ScalarField3D& f, int n, int N, const FscmOptions& options) {
  auto matrices = std::make_shared<const FemMatrices>(triangulate(prism.section, n));
  return fscm_solve(prism, f, build_singular_basis(matrices, prism.section, options.basis), N, options);
}

FscmSolution fscm_solve(const PrismSpec& prism, const ScalarField3D& f, SingularBasisPtr basis, int N,
                        const FscmOptions& options) {
  prism.validate();
  if (N < 1) throw InvalidArgument("fscm_solve: N must be >= 1");
  options.scm.validate(basis->alpha());

  const MeshPtr& mesh = basis->mesh();
  const std::size_t nv = mesh->vertex_count();
  const auto modes = static_cast<std::size_t>(N);
  const ModeProjector projector(prism.length, N, options.panels);

  // Quadrature points are projected onto the sine modes in fixed blocks, in
  // parallel, then accumulated in point order so results do not depend on threads.
  struct Sample {
    std::size_t t;
    std::array<double, 3> bary;
    Point2 p;
    double w;
  };
  std::vector<Sample> samples;
  for_each_quadrature_point(*mesh, basis->rule, [&](std::size_t t, const std::array<double, 3>& bary, Point2 p,
                                                    double w) { samples.push_back({t, bary, p, w}); });

  constexpr std::size_t kBlock = 2048;
  std::vector<std::vector<double>> loads(modes, std::vector<double>(nv, 0.0));
  std::vector<double> f_pP(modes, 0.0);
  std::vector<double> f_sq(modes, 0.0);
  std::vector<double> fk(kBlock * modes);
  for (std::size_t begin = 0; begin < samples.size(); begin += kBlock) {
    const std::size_t count = std::min(kBlock, samples.size() - begin);
    detail::parallel_for(static_cast<int>(count), options.threads, [&](int i) {
      const auto j = static_cast<std::size_t>(i);
      projector.project(f, samples[begin + j].p, std::span<double>(fk).subspan(j * modes, modes));
    });
    for (std::size_t j = 0; j < count; ++j) {
      const Sample& s = samples[begin + j];
      const double pP = eval_pP(basis->section, s.p);
      const Triangle& tri = mesh->triangles()[s.t];
      const double* fj = fk.data() + j * modes;
      for (std::size_t k = 0; k < modes; ++k) {
        const double fw = s.w * fj[k];
        loads[k][tri[0]] += fw * s.bary[0];
        loads[k][tri[1]] += fw * s.bary[1];
        loads[k][tri[2]] += fw * s.bary[2];
        f_pP[k] += fw * pP;
        f_sq[k] += fw * fj[k];
      }
    }
  }

  FscmSolution out{prism, basis, std::vector<ModeSolution>(modes)};
  detail::parallel_for(N, options.threads, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    ModeSource src{NodalField(mesh, std::move(loads[k])), f_pP[k], std::sqrt(f_sq[k])};
    for (std::size_t j = 0; j < nv; ++j) src.ps_product += src.load[j] * basis->p_tilde[j];
    const FemSystem system{basis->matrices, prism.mode_mu(i + 1)};
    try {
      out.modes[k] = solve_mode(system, src, basis, options.scm, i + 1);
    } catch (const NoConvergence& e) {
      throw NoConvergence("mode k=" + std::to_string(i + 1) + ": " + e.what(), e.iterations(), e.residual());
    } catch (const Error& e) {
      throw Error("mode k=" + std::to_string(i + 1) + ": " + e.what());
    }
  });
  return out;
}

double SeparableField3D::value(Point2 x, double x3) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.profile(x3) * t.section(x);
  return s;
}

std::array<double, 3> SeparableField3D::gradient(Point2 x, double x3) const {
  std::array<double, 3> g{};
  for (const auto& t : terms) {
    const double gv = t.profile(x3);
    const Point2 gu = t.section_gradient(x);
    g[0] += gv * gu.x;
    g[1] += gv * gu.y;
    g[2] += t.profile_d1(x3) * t.section(x);
  }
  return g;
}

double SeparableField3D::source(Point2 x, double x3) const {
  double s = 0.0;
  for (const auto& t : terms) s -= t.profile(x3) * t.section_laplacian(x) + t.profile_d2(x3) * t.section(x);
  return s;
}

double SeparableField3D::coefficient(std::size_t j, int k) const {
  const SeparableTerm& t = terms.at(j);
  if (t.sine_coefficient) return t.sine_coefficient(k);
  const ModeProjector proj(length, k, std::max(256, 16 * k), 6);
  std::vector<double> out(static_cast<std::size_t>(k));
  proj.project([&t](Point2, double x3) { return t.profile(x3); }, Point2{}, out);
  return out.back();
}

H1Error3D h1_error_3d(const FscmSolution& solution, const SeparableField3D& exact, int reference_modes) {
  const int N = solution.mode_count();
  const std::size_t J = exact.terms.size();
  bool closed_form = true;
  for (const auto& t : exact.terms) closed_form = closed_form && static_cast<bool>(t.sine_coefficient);
  const int kref = reference_modes > 0 ? std::max(reference_modes, N) : (closed_form ? N + 4096 : 2 * N + 64);

  // coeff[j][k - 1]
  std::vector<std::vector<double>> coeff(J, std::vector<double>(static_cast<std::size_t>(kref)));
  for (std::size_t j = 0; j < J; ++j) {
    const SeparableTerm& t = exact.terms[j];
    if (t.sine_coefficient) {
      for (int k = 1; k <= kref; ++k) coeff[j][k - 1] = t.sine_coefficient(k);
    } else {
      const ModeProjector proj(exact.length, kref, std::max(256, 16 * kref), 6);
      proj.project([&t](Point2, double x3) { return t.profile(x3); }, Point2{}, coeff[j]);
    }
  }

  const SingularBasis& basis = *solution.basis;
  const TriMesh& mesh = *basis.mesh();
  std::vector<double> err_sq(static_cast<std::size_t>(N), 0.0);
  std::vector<double> gram0(J * J, 0.0);
  std::vector<double> gram1(J * J, 0.0);
  std::vector<double> U(J);
  std::vector<Point2> dU(J);
  bool any_singular = false;
  for (const auto& m : solution.modes) any_singular = any_singular || m.singular_weight != 0.0;

  for_each_quadrature_point(mesh, basis.rule, [&](std::size_t t, const std::array<double, 3>& bary, Point2 p,
                                                  double w) {
    for (std::size_t j = 0; j < J; ++j) {
      U[j] = exact.terms[j].section(p);
      dU[j] = exact.terms[j].section_gradient(p);
    }
    for (std::size_t a = 0; a < J; ++a) {
      for (std::size_t b = 0; b < J; ++b) {
        gram0[a * J + b] += w * U[a] * U[b];
        gram1[a * J + b] += w * dot(dU[a], dU[b]);
      }
    }
    const double phiP = any_singular ? eval_phiP(basis.section, p) : 0.0;
    const Point2 gphiP = any_singular ? grad_phiP(basis.section, p) : Point2{};
    for (int k = 1; k <= N; ++k) {
      const ModeSolution& m = solution.modes[static_cast<std::size_t>(k - 1)];
      double uk = 0.0;
      Point2 guk;
      for (std::size_t j = 0; j < J; ++j) {
        uk += coeff[j][k - 1] * U[j];
        guk = guk + coeff[j][k - 1] * dU[j];
      }
      const double uh = m.p1_part.evaluate_in(t, bary) + m.singular_weight * phiP;
      const Point2 guh = m.p1_part.gradient_in(t) + m.singular_weight * gphiP;
      const Point2 de = guk - guh;
      const double e = uk - uh;
      err_sq[static_cast<std::size_t>(k - 1)] += w * (dot(de, de) + m.mu * e * e);
    }
  });

  const double half_l = 0.5 * solution.prism.length;
  H1Error3D out;
  double head = 0.0;
  for (int k = 1; k <= N; ++k) {
    const double e = std::max(0.0, err_sq[static_cast<std::size_t>(k - 1)]);
    out.mode_a_errors.push_back(std::sqrt(e));
    head += e;
  }
  double tail = 0.0;
  for (int k = N + 1; k <= kref; ++k) {
    const double mu = solution.prism.mode_mu(k);
    double s = 0.0;
    for (std::size_t a = 0; a < J; ++a) {
      for (std::size_t b = 0; b < J; ++b) {
        s += coeff[a][k - 1] * coeff[b][k - 1] * (gram1[a * J + b] + mu * gram0[a * J + b]);
      }
    }
    tail += std::max(0.0, s);
  }
  out.tail = std::sqrt(half_l * tail);
  out.total = std::sqrt(half_l * (head + tail));
  return out;
}

}  // namespace fscm
