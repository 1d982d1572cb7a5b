#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gpx {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent model / parameter record.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// The ODE integrator could not advance (non-finite right-hand side, step underflow).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// A grid state is not resolved: boundary tail mass or spectral tail too large.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// The propagator kernel is singular (conjugate point) on the requested interval.
/// Callers sub-split the interval and compose.
class CausticError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// J = [[0, -I], [I, 0]] in the (p, x) ordering.
Mat symplectic_unit(int n);

inline Mat symmetrized(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace gpx
