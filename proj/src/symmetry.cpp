#include "gpx/symmetry.hpp"

#include <cmath>

#include "gpx/fft.hpp"

namespace gpx {

namespace {

const Example1DParams& require_1d(const QuadraticModel& model) {
  if (!model.ex1d) throw ModelError("operation defined for the 1D example only");
  return *model.ex1d;
}

double omega_of(const Example1DParams& p, double kt) {
  const double w2 = p.Omega_sq(kt);
  if (!(w2 > 0.0)) throw ModelError("Omega^2 <= 0");
  return std::sqrt(w2);
}

bool empty_or_zero(const CMat& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0; }

GridState times_dx(const GridState& phi, int axis, double x0) {
  GridState out = phi;
  std::vector<double> x(static_cast<std::size_t>(phi.dim()));
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi.coordinates(i, x);
    out.data[i] *= x[static_cast<std::size_t>(axis)] - x0;
  }
  return out;
}

GridState times_dp(const GridState& phi, int axis, double p0) {
  GridState out = apply_momentum(phi, axis);
  for (std::size_t i = 0; i < phi.size(); ++i) out.data[i] -= p0 * phi.data[i];
  return out;
}

void accumulate(GridState& acc, cplx c, const GridState& term) {
  if (c == cplx{0.0, 0.0}) return;
  for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += c * term.data[i];
}

EvolveOptions with_fixed_coupling(const QuadraticModel& model, const GridState& Psi, const EvolveOptions& opts) {
  EvolveOptions o = opts;
  if (!o.kappa_tilde) o.kappa_tilde = effective_coupling(model, norm_squared(Psi, opts.moments));
  return o;
}

}  // namespace

GridState apply_operator(const IntertwinedOperator& a, const GridState& phi, const MomentOptions& opts) {
  const int n = phi.dim();
  const Vec center = a.center ? *a.center : first_moments(phi, opts);
  if (center.size() != 2 * n) throw GridMismatchError("operator centre has the wrong dimension");
  auto p0 = [&](int j) { return center(j); };
  auto x0 = [&](int j) { return center(n + j); };

  GridState out = scaled(phi, a.c0);
  std::vector<GridState> dp, dx;
  for (int j = 0; j < n; ++j) {
    dp.push_back(times_dp(phi, j, p0(j)));
    dx.push_back(times_dx(phi, j, x0(j)));
  }
  for (int j = 0; j < n; ++j) {
    if (a.cp.size()) accumulate(out, a.cp(j), dp[static_cast<std::size_t>(j)]);
    if (a.cx.size()) accumulate(out, a.cx(j), dx[static_cast<std::size_t>(j)]);
  }
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const auto ju = static_cast<std::size_t>(j), ku = static_cast<std::size_t>(k);
      if (!empty_or_zero(a.cpp) && a.cpp(j, k) != 0.0) {
        accumulate(out, 0.5 * a.cpp(j, k), times_dp(dp[ku], j, p0(j)));
      }
      if (!empty_or_zero(a.cxx) && a.cxx(j, k) != 0.0) {
        accumulate(out, 0.5 * a.cxx(j, k), times_dx(dx[ku], j, x0(j)));
      }
      if (!empty_or_zero(a.cpx) && a.cpx(j, k) != 0.0) {
        accumulate(out, 0.5 * a.cpx(j, k), times_dp(dx[ku], j, p0(j)));
        accumulate(out, 0.5 * a.cpx(j, k), times_dx(dp[ju], k, x0(k)));
      }
    }
  }
  return out;
}

GridState apply_symmetry(const QuadraticModel& model, const IntertwinedOperator& a, const GridState& Psi, double s,
                         const EvolveOptions& opts) {
  const EvolveOptions fixed = with_fixed_coupling(model, Psi, opts);
  EvolveOptions back = fixed;
  back.output_axes.reset();
  const GridState phi0 = evolve_inverse(model, Psi, s, back);
  const GridState aphi = apply_operator(a, phi0, opts.moments);
  if (l2_norm(aphi) <= 1e-8 * l2_norm(phi0)) {
    return zero_state(opts.output_axes.value_or(Psi.axes), Psi.t, Psi.hbar);
  }
  EvolveOptions fwd = fixed;
  if (!fwd.output_axes) fwd.output_axes = Psi.axes;
  return evolve(model, aphi, Psi.t, fwd);
}

GridState exp_generator(const IntertwinedOperator& b, double alpha, const GridState& phi, const MomentOptions& opts) {
  const int n = phi.dim();
  if (!empty_or_zero(b.cpp) || !empty_or_zero(b.cpx) || !empty_or_zero(b.cxx)) {
    throw ConfigError("exp(alpha b) is implemented for scalar and linear generators only");
  }
  CVec cx = b.cx.size() ? b.cx : CVec::Zero(n);
  CVec cp = b.cp.size() ? b.cp : CVec::Zero(n);
  if (cp.real().cwiseAbs().maxCoeff() > 0.0) {
    throw ConfigError("exp(alpha b) needs a purely imaginary momentum coefficient");
  }
  const Vec v = cp.imag();
  const Vec center = b.center ? *b.center : first_moments(phi, opts);
  const Vec p0 = center.head(n), x0 = center.tail(n);
  const double hbar = phi.hbar;

  GridState out = phi;
  for (int d = 0; d < n; ++d) {
    if (v(d) != 0.0) spectral_shift(out, d, alpha * hbar * v(d));
  }
  const cplx constant = alpha * b.c0 - kI * alpha * v.dot(p0) + 0.5 * alpha * alpha * hbar * cx.dot(v.cast<cplx>());
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.coordinates(i, x);
    cplx e = constant;
    for (int d = 0; d < n; ++d) e += alpha * cx(d) * (x[static_cast<std::size_t>(d)] - x0(d));
    out.data[i] *= std::exp(e);
  }
  return out;
}

GridState one_parameter_family(const QuadraticModel& model, const IntertwinedOperator& b, double alpha,
                               const GridState& Psi, double s, const EvolveOptions& opts) {
  if (alpha == 0.0) return Psi;
  const EvolveOptions fixed = with_fixed_coupling(model, Psi, opts);
  EvolveOptions back = fixed;
  back.output_axes.reset();
  const GridState phi0 = evolve_inverse(model, Psi, s, back);
  const GridState moved = exp_generator(b, alpha, phi0, opts.moments);
  EvolveOptions fwd = fixed;
  if (!fwd.output_axes) fwd.output_axes = Psi.axes;
  return evolve(model, moved, Psi.t, fwd);
}

IntertwinedOperator ladder_operator(const QuadraticModel& model, double kappa_tilde, int sign) {
  const Example1DParams& p = require_1d(model);
  const double w = omega_of(p, kappa_tilde);
  const double norm = 1.0 / std::sqrt(2.0 * model.hbar * p.m * w);
  IntertwinedOperator a;
  a.cp = CVec::Constant(1, norm);
  a.cx = CVec::Constant(1, (sign > 0 ? 1.0 : -1.0) * kI * p.m * w * norm);
  return a;
}

GridState ladder_apply(const QuadraticModel& model, int sign, const GridState& Psi, double s,
                       const EvolveOptions& opts) {
  const EvolveOptions fixed = with_fixed_coupling(model, Psi, opts);
  return apply_symmetry(model, ladder_operator(model, *fixed.kappa_tilde, sign), Psi, s, fixed);
}

Vec steady_orbit(const Example1DParams& p, double kappa_tilde, double t) {
  const double X0 = p.steady_amplitude(kappa_tilde);
  Vec z(2);
  z << -p.m * p.omega * X0 * std::sin(p.omega * t), X0 * std::cos(p.omega * t);
  return z;
}

MomentPoint fock_moments(const QuadraticModel& model, int n, double t, double kappa_tilde) {
  const Example1DParams& p = require_1d(model);
  const double w = omega_of(p, kappa_tilde);
  const double sxx = model.hbar * (2.0 * n + 1.0) / (2.0 * p.m * w);
  MomentPoint g;
  g.z = steady_orbit(p, kappa_tilde, t);
  g.Delta = Mat::Zero(2, 2);
  g.Delta(0, 0) = p.m * p.m * w * w * sxx;
  g.Delta(1, 1) = sxx;
  return g;
}

double fock_action(const QuadraticModel& model, int n, double t, double kappa_tilde) {
  const Example1DParams& p = require_1d(model);
  const double X0 = p.steady_amplitude(kappa_tilde);
  const double sigma = fock_moments(model, n, 0.0, kappa_tilde).Delta(1, 1);
  const double K = p.k + kappa_tilde * (p.a + 2.0 * p.b + p.c);
  const double kinetic = 0.25 * p.m * p.omega * p.omega * X0 * X0;
  const double potential = 0.5 * (p.e * p.E * X0 - 0.5 * K * X0 * X0);
  const double secular = kinetic + potential - 0.5 * kappa_tilde * p.c * sigma;
  const double oscillating = p.omega != 0.0 ? (potential - kinetic) * std::sin(2.0 * p.omega * t) / (2.0 * p.omega)
                                            : (potential - kinetic) * t;
  return secular * t + oscillating;
}

std::vector<double> hermite_functions(int n, double xi) {
  std::vector<double> h(static_cast<std::size_t>(n) + 1);
  h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
  if (n >= 1) h[1] = std::sqrt(2.0) * xi * h[0];
  for (int k = 1; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    h[ku + 1] = std::sqrt(2.0 / (k + 1.0)) * xi * h[ku] - std::sqrt(k / (k + 1.0)) * h[ku - 1];
  }
  return h;
}

GridState fock_state(const QuadraticModel& model, int n, double t, const std::vector<Axis>& axes,
                     std::optional<double> kappa_tilde) {
  const Example1DParams& p = require_1d(model);
  if (n < 0) throw ModelError("Fock level must be nonnegative");
  const double kt = kappa_tilde.value_or(model.kappa);
  const double w = omega_of(p, kt);
  const double hbar = model.hbar;
  const Vec z = steady_orbit(p, kt, t);
  const double S = fock_action(model, n, t, kt);
  const double scale = std::sqrt(p.m * w / hbar);
  const cplx level_phase = std::pow(kI, n) * std::polar(1.0, -(n + 0.5) * w * t);
  return sample_state(axes, t, hbar, [&](std::span<const double> x) {
    const double dx = x[0] - z(1);
    const double h = hermite_functions(n, scale * dx)[static_cast<std::size_t>(n)];
    return level_phase * std::sqrt(scale) * h * std::polar(1.0, (S + z(0) * dx) / hbar);
  });
}

double quasi_energy(const QuadraticModel& model, int n, double kappa_tilde) {
  const Example1DParams& p = require_1d(model);
  const double w = omega_of(p, kappa_tilde);
  const double gap = p.OmegaTilde_sq(kappa_tilde) - p.omega * p.omega;
  if (std::abs(gap) < 1e-14) throw ModelError("resonant drive: OmegaTilde^2 == omega^2");
  const double eE2 = p.e * p.e * p.E * p.E;
  const double nl = kappa_tilde * (p.a + 2.0 * p.b + p.c) / p.m;
  return -eE2 / (2.0 * p.m * gap) - eE2 * (p.omega * p.omega - p.omega0_sq() - nl) / (4.0 * p.m * gap * gap) +
         model.hbar * (w + kappa_tilde * p.c / (2.0 * p.m * w)) * (n + 0.5);
}

}  // namespace gpx
