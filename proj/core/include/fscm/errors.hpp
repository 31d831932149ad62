#pragma once

#include <stdexcept>
#include <string>

namespace fscm {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The section is not an axis-aligned rectilinear polygon on the requested grid.
class UnsupportedGeometry : public Error {
 public:
  using Error::Error;
};

/// A point maps to a polar angle outside [0, pi/alpha].
class OutsideWedge : public Error {
 public:
  using Error::Error;
};

class OutsideDomain : public Error {
 public:
  using Error::Error;
};

class DegenerateTriangle : public Error {
 public:
  using Error::Error;
};

/// rho^{-alpha} was requested at the reentrant corner itself.
class CornerSingularity : public Error {
 public:
  using Error::Error;
};

/// Integrand decays like rho^{-sigma} with sigma >= 2.
class NotIntegrable : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace fscm
