#pragma once

#include <functional>
#include <optional>

#include <nlohmann/json.hpp>

#include "gpx/types.hpp"

namespace gpx {

/// Driven 1D oscillator with the quadratic nonlocal interaction
/// V(x, y) = (a x^2 + 2 b x y + c y^2) / 2.
struct Example1DParams {
  double m = 1.0;
  double k = 1.0;
  double e = 1.0;
  double E = 0.0;
  double omega = 0.0;  // drive frequency
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double omega0_sq() const { return k / m; }
  /// Omega^2 = w0^2 + kt*a/m, the frequency of the quadratic part.
  double Omega_sq(double kappa_tilde) const { return omega0_sq() + kappa_tilde * a / m; }
  /// OmegaTilde^2 = w0^2 + kt*(a+b)/m, the frequency felt by the centre.
  double OmegaTilde_sq(double kappa_tilde) const {
    return omega0_sq() + kappa_tilde * (a + b) / m;
  }
  /// Amplitude eE / (m (OmegaTilde^2 - w^2)) of the steady forced orbit.
  double steady_amplitude(double kappa_tilde) const;
};

/// 3D oscillator in a constant magnetic field along x3, a rotating electric
/// field in the (x1, x2) plane and a truncated Gaussian interaction.
struct Example3DParams {
  double m = 1.0;
  double e = 1.0;
  double c_light = 1.0;
  double H_field = 0.0;
  double E_field = 0.0;
  double omega = 0.0;
  double k = 1.0;
  double V0 = 0.0;
  double gamma = 1.0;

  double omega_H() const { return e * H_field / (m * c_light); }
  double omega0_sq() const { return k / m; }
  double eta() const { return V0 / (gamma * gamma); }
  double omega1_sq(double kappa_tilde) const {
    const double wh = 0.5 * omega_H();
    return omega0_sq() + wh * wh - kappa_tilde * eta() / m;
  }
  double omega2_sq(double kappa_tilde) const { return omega0_sq() - kappa_tilde * eta() / m; }
};

/// Quadratic GPE problem: H(z,t) = <z,Hzz z>/2 + <Hz,z>, V(z,w) built from Wzz, Wzw, Www.
/// Phase-space ordering is z = (p_1..p_n, x_1..x_n). Immutable after construction.
struct QuadraticModel {
  int n = 1;
  double hbar = 1.0;
  double mass = 1.0;
  double kappa = 0.0;
  std::function<Mat(double)> Hzz;
  std::function<Vec(double)> Hz;
  Mat Wzz;
  Mat Wzw;
  Mat Www;
  std::optional<Example1DParams> ex1d;
  std::optional<Example3DParams> ex3d;
  nlohmann::json spec;  // the record this model was built from

  int phase_dim() const { return 2 * n; }
};

/// Builds and validates a model from a JSON record
/// {"example": "1d" | "3d" | "custom", "hbar", "kappa", ...}.
/// Inputs asymmetric beyond 1e-12 are rejected; smaller asymmetry is removed.
QuadraticModel build_model(const nlohmann::json& spec);

QuadraticModel make_example_1d(const Example1DParams& p, double kappa, double hbar = 1.0);
QuadraticModel make_example_3d(const Example3DParams& p, double kappa, double hbar = 1.0);

nlohmann::json model_to_json(const QuadraticModel& model);

/// Hzz(t) + kappa_tilde * Wzz, exactly symmetric.
Mat effective_hessian(const QuadraticModel& model, double kappa_tilde, double t);

/// kappa * ||psi||^2.
inline double effective_coupling(const QuadraticModel& model, double norm_sq) {
  return model.kappa * norm_sq;
}

}  // namespace gpx
