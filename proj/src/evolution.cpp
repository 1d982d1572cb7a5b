#include "gpx/evolution.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace gpx {

namespace {

double smallest_singular_value(const Mat& m) {
  const Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().minCoeff();
}

// Worst ratio sigma_min(A_xp(tau, a)) / (|tau - a| sigma_min(h_pp(a))) on (a, b];
// negative if det A_xp changes sign relative to the short-time limit.
double split_quality(const QuadraticModel& model, double kt, const MatriciantTrajectory& var, double a, double b,
                     int samples) {
  const int n = model.n;
  const Mat hpp = effective_hessian(model, kt, a).topLeftCorner(n, n);
  const double hmin = smallest_singular_value(hpp);
  const double det_h = hpp.determinant();
  const Mat Ainv = var.at(a).inverse();
  double worst = 1.0;
  for (int k = 1; k <= samples; ++k) {
    const double tk = a + (b - a) * static_cast<double>(k) / samples;
    const Mat Axp = (var.at(tk) * Ainv).bottomLeftCorner(n, n);
    const double tau = tk - a;
    const double sign = Axp.determinant() / (std::pow(tau, n) * det_h);
    if (!(sign > 0.0)) return -1.0;
    worst = std::min(worst, smallest_singular_value(Axp) / (std::abs(tau) * hmin));
  }
  return worst;
}

}  // namespace

std::vector<double> plan_splits(const QuadraticModel& model, double kappa_tilde, double s, double t,
                                const EvolveOptions& opts) {
  if (s == t) return {s};
  const MatriciantTrajectory var = integrate_variations_dense(model, kappa_tilde, s, t, opts.ode);
  for (int k = 1; k <= opts.max_splits; ++k) {
    std::vector<double> cuts(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) cuts[static_cast<std::size_t>(i)] = s + (t - s) * static_cast<double>(i) / k;
    cuts.back() = t;
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      ok = split_quality(model, kappa_tilde, var, cuts[static_cast<std::size_t>(i)],
                         cuts[static_cast<std::size_t>(i) + 1], opts.rho_samples) >= opts.min_rho;
    }
    if (ok) return cuts;
  }
  throw CausticError("no caustic-free partition found within the split limit");
}

EvolveResult evolve_detailed(const QuadraticModel& model, const GridState& psi, double t, const EvolveOptions& opts) {
  EvolveResult res;
  res.constants = constants_of_motion(model, psi, opts.moments);
  const double kt = opts.kappa_tilde.value_or(res.constants.kappa_tilde);
  res.constants.kappa_tilde = kt;
  const double s = psi.t;
  if (s == t) {
    res.state = psi;
    res.trajectory = integrate_hes(model, kt, res.constants.g, s, t, opts.ode);
    return res;
  }
  if (model.ex1d && !(model.ex1d->Omega_sq(kt) > 0.0)) throw ModelError("Omega^2 <= 0: no oscillatory kernel");
  if (model.ex3d && !(model.ex3d->omega1_sq(kt) > 0.0 && model.ex3d->omega2_sq(kt) > 0.0)) {
    throw ModelError("omega_1^2 or omega_2^2 <= 0: no oscillatory kernel");
  }

  res.trajectory = integrate_hes(model, kt, res.constants.g, s, t, opts.ode);
  const auto cuts = plan_splits(model, kt, s, t, opts);
  spdlog::debug("evolve {} -> {} in {} split(s), kappa_tilde={}", s, t, cuts.size() - 1, kt);

  GridState cur = psi;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const bool last = i + 2 == cuts.size();
    const MatriciantTrajectory var = integrate_variations_dense(model, kt, a, b, opts.ode);
    const KernelContext ctx = make_kernel_context(model, res.trajectory, var, a, b, opts.kernel);
    std::vector<Axis> out_axes;
    if (last && opts.output_axes) {
      out_axes = *opts.output_axes;
    } else {
      out_axes = recentered(cur.axes, ctx.Xt);
    }
    SplitInfo info;
    info.t0 = a;
    info.t1 = b;
    info.dS = ctx.dS;
    info.prefactor = ctx.prefactor;
    info.min_det_ratio = ctx.min_det_ratio;
    cur = apply_kernel(ctx, cur, out_axes, opts.quadrature, &info.quadrature);
    cur.t = b;
    if (!last) check_resolved(cur, opts.moments);
    res.splits.push_back(std::move(info));
  }
  res.state = std::move(cur);
  return res;
}

GridState evolve(const QuadraticModel& model, const GridState& psi, double t, const EvolveOptions& opts) {
  return evolve_detailed(model, psi, t, opts).state;
}

GridState evolve_inverse(const QuadraticModel& model, const GridState& Psi, double s, const EvolveOptions& opts) {
  return evolve(model, Psi, s, opts);
}

GridState evolve_composed(const QuadraticModel& model, const GridState& psi, double r, double t,
                          const EvolveOptions& opts) {
  EvolveOptions first = opts;
  first.output_axes.reset();
  if (!first.kappa_tilde) {
    first.kappa_tilde = effective_coupling(model, norm_squared(psi, opts.moments));
  }
  const GridState mid = evolve(model, psi, r, first);
  EvolveOptions second = opts;
  second.kappa_tilde = first.kappa_tilde;
  return evolve(model, mid, t, second);
}

GridState superpose(const QuadraticModel& model, const GridState& Psi1, const GridState& Psi2, cplx c1, cplx c2,
                    double s, const EvolveOptions& opts, const std::optional<std::vector<Axis>>& pullback_axes) {
  if (Psi1.t != Psi2.t) throw GridMismatchError("superposed solutions must share a time");
  const double t = Psi1.t;
  std::vector<Axis> common;
  if (pullback_axes) {
    common = *pullback_axes;
  } else {
    const Constants k1 = constants_of_motion(model, Psi1, opts.moments);
    const Constants k2 = constants_of_motion(model, Psi2, opts.moments);
    const Vec x1 = integrate_hes(model, k1.kappa_tilde, k1.g, t, s, opts.ode).at(s).X(model.n);
    const Vec x2 = integrate_hes(model, k2.kappa_tilde, k2.g, t, s, opts.ode).at(s).X(model.n);
    common = recentered(Psi1.axes, 0.5 * (x1 + x2));
  }
  EvolveOptions back = opts;
  back.kappa_tilde.reset();
  back.output_axes = common;
  const GridState phi1 = evolve_inverse(model, Psi1, s, back);
  const GridState phi2 = evolve_inverse(model, Psi2, s, back);
  const GridState phi = linear_combination(c1, phi1, c2, phi2);
  if (!(l2_norm(phi) > 0.0)) throw ResolutionError("superposition has zero norm");
  return evolve(model, phi, t, opts);
}

}  // namespace gpx
