#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fscm {

struct PcgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for an SPD operator.
///
/// `apply(x, y)` must write y = A x. Stops when ||b - A x|| <= tol ||b||
/// (recursively updated residual) or after max_iterations. x holds the
/// initial guess on entry.
template <typename Apply>
PcgResult pcg_solve(Apply&& apply, std::span<const double> inverse_diagonal, std::span<const double> b,
                    std::span<double> x, double tol, int max_iterations) {
  const std::size_t n = b.size();
  PcgResult result;

  double b_norm = 0.0;
  for (double v : b) b_norm += v * v;
  b_norm = std::sqrt(b_norm);
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    result.converged = true;
    return result;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  apply(std::span<const double>(x), std::span<double>(q));
  double r_norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = b[i] - q[i];
    r_norm2 += r[i] * r[i];
  }
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = inverse_diagonal[i] * r[i];
    p[i] = z[i];
    rz += r[i] * z[i];
  }

  result.relative_residual = std::sqrt(r_norm2) / b_norm;
  while (result.relative_residual > tol && result.iterations < max_iterations) {
    ++result.iterations;
    apply(std::span<const double>(p), std::span<double>(q));
    double pq = 0.0;
    for (std::size_t i = 0; i < n; ++i) pq += p[i] * q[i];
    const double step = rz / pq;
    r_norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * q[i];
      r_norm2 += r[i] * r[i];
    }
    result.relative_residual = std::sqrt(r_norm2) / b_norm;
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = inverse_diagonal[i] * r[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  result.converged = result.relative_residual <= tol;
  return result;
}

}  // namespace fscm
