#pragma once

#include <optional>

#include "gpx/evolution.hpp"

namespace gpx {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// a = c0 + <cp, dp> + <cx, dx> + <dp, cpp dp>/2 + sum cpx_jk W(dp_j dx_k) + <dx, cxx dx>/2,
/// with dp = p - p0, dx = x - x0 and W(.) the symmetrized product. Empty
/// coefficient arrays count as zero.
struct IntertwinedOperator {
  cplx c0{0.0, 0.0};
  CVec cp, cx;
  CMat cpp, cpx, cxx;
  /// (p0, x0); defaults to the first moments of the state acted on.
  std::optional<Vec> center;
};

/// Applies the polynomial operator to a grid state.
GridState apply_operator(const IntertwinedOperator& a, const GridState& phi, const MomentOptions& opts = {});

/// Phi = U(t, a U^-1(s, Psi)) with t = Psi.t. The effective coupling stays
/// that of Psi so that rescaled data follow the same linear flow. Returns the
/// zero state if a annihilates the pulled-back state.
GridState apply_symmetry(const QuadraticModel& model, const IntertwinedOperator& a, const GridState& Psi,
                         double s = 0.0, const EvolveOptions& opts = {});

/// exp(alpha b) for b = c0 + <cx, dx> + i <v, dp> (v real) in closed form:
/// a phase, a complex exponential in dx and a shift by alpha hbar v.
GridState exp_generator(const IntertwinedOperator& b, double alpha, const GridState& phi,
                        const MomentOptions& opts = {});

/// B(alpha, Psi) = U(t, exp(alpha b) U^-1(s, Psi)). Throws ConfigError for
/// generators beyond the scalar-plus-linear class with imaginary cp.
GridState one_parameter_family(const QuadraticModel& model, const IntertwinedOperator& b, double alpha,
                               const GridState& Psi, double s = 0.0, const EvolveOptions& opts = {});

/// a+- = (dp +- i m Omega dx) / sqrt(2 hbar m Omega) for the 1D example.
IntertwinedOperator ladder_operator(const QuadraticModel& model, double kappa_tilde, int sign);

/// Ladder step on a 1D-example solution pulled back to s.
GridState ladder_apply(const QuadraticModel& model, int sign, const GridState& Psi, double s = 0.0,
                       const EvolveOptions& opts = {});

/// Steady forced orbit (P(t), X(t)) of the 1D example.
Vec steady_orbit(const Example1DParams& p, double kappa_tilde, double t);

/// Moments of the n-th Fock solution at time t.
MomentPoint fock_moments(const QuadraticModel& model, int n, double t, double kappa_tilde);

/// Action S(t) along the steady orbit, S(0) = 0, including the mean-field trace term.
double fock_action(const QuadraticModel& model, int n, double t, double kappa_tilde);

/// Closed-form n-th Fock solution of the 1D example sampled at time t.
/// kappa_tilde defaults to kappa (unit norm).
GridState fock_state(const QuadraticModel& model, int n, double t, const std::vector<Axis>& axes,
                     std::optional<double> kappa_tilde = std::nullopt);

/// Quasi-energy of the n-th Fock solution.
double quasi_energy(const QuadraticModel& model, int n, double kappa_tilde);

/// Normalized Hermite functions phi_0..phi_n at xi.
std::vector<double> hermite_functions(int n, double xi);

}  // namespace gpx
