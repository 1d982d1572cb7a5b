#pragma once

#include <cmath>
#include <vector>

#include "gpx/grid.hpp"
#include "gpx/model.hpp"

namespace testing {

inline gpx::Example1DParams example_params() {
  gpx::Example1DParams p;
  p.m = 1.0;
  p.k = 1.0;
  p.e = 1.0;
  p.E = 0.1;
  p.omega = 0.5;
  p.a = 0.2;
  p.b = 0.1;
  p.c = 0.3;
  return p;
}

inline gpx::QuadraticModel example_model(double kappa = 0.5) { return gpx::make_example_1d(example_params(), kappa); }

/// Plain oscillator with frequency w0 and mass m, no drive, no interaction.
inline gpx::QuadraticModel harmonic_model(double w0 = 1.0, double m = 1.0) {
  gpx::Example1DParams p;
  p.m = m;
  p.k = m * w0 * w0;
  return gpx::make_example_1d(p, 0.0);
}

inline gpx::QuadraticModel free_model(double m = 1.0) {
  return gpx::build_model({{"example", "custom"}, {"n", 1}, {"mass", m}, {"Hzz", {{1.0 / m, 0.0}, {0.0, 0.0}}}});
}

inline gpx::Example3DParams example3d_params() {
  gpx::Example3DParams p;
  p.H_field = 0.6;
  p.E_field = 0.2;
  p.omega = 0.7;
  p.V0 = 0.3;
  p.gamma = 2.0;
  return p;
}

inline std::vector<gpx::Axis> line(double lo = -16.0, double hi = 16.0, std::size_t n = 1024) {
  return {gpx::Axis{lo, hi, n}};
}

inline gpx::GridState packet(double x0, double p0, double sigma, double chirp = 0.0,
                             const std::vector<gpx::Axis>& axes = line()) {
  return gpx::gaussian_state(axes, gpx::Vec::Constant(1, x0), gpx::Vec::Constant(1, p0), gpx::Vec::Constant(1, sigma),
                             1.0, 0.0, chirp);
}

/// Least-squares slope of log(e) against log(h).
inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing
