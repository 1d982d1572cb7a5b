#include "gpx/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gpx/grid.hpp"

namespace gpx {

double mean_field_energy(const QuadraticModel& model, double kappa_tilde, double t, const MomentPoint& g) {
  const Mat q = model.Hzz(t) + kappa_tilde * (model.Wzz + model.Wzw + model.Wzw.transpose() + model.Www);
  return 0.5 * g.z.dot(q * g.z) + model.Hz(t).dot(g.z) + 0.5 * kappa_tilde * (model.Www * g.Delta).trace();
}

double action_integral(const QuadraticModel& model, const MomentTrajectory& trajectory, double s, double t) {
  if (s == t) return 0.0;
  const int n = model.n;
  const double kt = trajectory.kappa_tilde();
  auto lagrangian = [&](double tau) {
    const MomentPoint g = trajectory.at(tau);
    const MomentPoint r = hes_rhs(model, kt, tau, g);
    return g.P(n).dot(r.X(n)) - mean_field_energy(model, kt, tau, g);
  };
  const double lo = std::min(s, t), hi = std::max(s, t);
  // Integrate over the mesh pieces inside [lo, hi]; the integrand is smooth on each.
  std::vector<double> cuts{lo};
  for (double m : trajectory.mesh()) {
    if (m > lo && m < hi) cuts.push_back(m);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(lagrangian, cuts[i], cuts[i + 1], 0,
                                                                            1e-14);
  }
  return t > s ? total : -total;
}

namespace {

cplx short_time_prefactor(const Mat& hpp, double tau, double hbar) {
  const Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(hpp));
  cplx f{1.0, 0.0};
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    f /= std::sqrt(2.0 * kPi * kI * hbar * tau * es.eigenvalues()(j));
  }
  return f;
}

}  // namespace

KernelContext make_kernel_context(const QuadraticModel& model, const MomentTrajectory& trajectory,
                                  const MatriciantTrajectory& variations, double s, double t,
                                  const KernelOptions& opts) {
  if (s == t) throw CausticError("kernel requested for a zero-length interval");
  if (variations.s() != s) throw ModelError("matriciant must start at the kernel source time");
  const int n = model.n;
  const double tau = t - s;
  const double kt = trajectory.kappa_tilde();

  KernelContext ctx;
  ctx.n = n;
  ctx.hbar = model.hbar;
  ctx.s = s;
  ctx.t = t;
  ctx.kappa_tilde = kt;
  const MomentPoint gs = trajectory.at(s);
  const MomentPoint gt = trajectory.at(t);
  ctx.Ps = gs.P(n);
  ctx.Xs = gs.X(n);
  ctx.Pt = gt.P(n);
  ctx.Xt = gt.X(n);
  ctx.A = variations.at(t);
  ctx.blocks = matriciant_blocks(ctx.A);

  const Mat hpp = effective_hessian(model, kt, s).topLeftCorner(n, n);
  const double det_hpp = hpp.determinant();
  const double nn = static_cast<double>(n);

  // det A_xp(tau) / (tau^n det h_pp) -> 1 as tau -> 0; its sign may not change.
  double min_ratio = 1.0;
  const int samples = std::max(2, opts.branch_samples);
  double ratio_t = 1.0;
  for (int k = 1; k <= samples; ++k) {
    const double tk = s + tau * static_cast<double>(k) / samples;
    const Mat Ak = k == samples ? ctx.A : variations.at(tk);
    const double r = Ak.bottomLeftCorner(n, n).determinant() / (std::pow(tk - s, nn) * det_hpp);
    min_ratio = std::min(min_ratio, r);
    if (k == samples) ratio_t = r;
    if (r <= 0.0) {
      std::ostringstream msg;
      msg << "caustic between s=" << s << " and t=" << tk << "; split the interval";
      throw CausticError(msg.str());
    }
  }
  ctx.min_det_ratio = min_ratio;
  if (std::abs(ratio_t) <= opts.caustic_tol) {
    throw CausticError("kernel is too close to a caustic at the end of the interval");
  }

  ctx.prefactor = short_time_prefactor(hpp, tau, model.hbar) / std::sqrt(ratio_t);

  const Mat& l1 = ctx.blocks.lambda1;
  const Mat& l3 = ctx.blocks.lambda3;
  const Mat& l4 = ctx.blocks.lambda4;
  const Eigen::FullPivLU<Mat> lu(l3);
  const Mat l3inv = lu.inverse();
  ctx.Qyy = symmetrized(-l1 * l3inv);
  ctx.Qxy = l3inv;
  ctx.Qxx = symmetrized(-l3inv * l4);
  ctx.dS = action_integral(model, trajectory, s, t);
  return ctx;
}

KernelContext make_kernel_context(const QuadraticModel& model, double kappa_tilde, const MomentPoint& g_s, double s,
                                  double t, const OdeTolerance& tol, const KernelOptions& opts) {
  const MomentTrajectory traj = integrate_hes(model, kappa_tilde, g_s, s, t, tol);
  const MatriciantTrajectory var = integrate_variations_dense(model, kappa_tilde, s, t, tol);
  return make_kernel_context(model, traj, var, s, t, opts);
}

double kernel_phase(const KernelContext& ctx, std::span<const double> x, std::span<const double> y) {
  const Eigen::Map<const Vec> xv(x.data(), ctx.n), yv(y.data(), ctx.n);
  const Vec dx = xv - ctx.Xt;
  const Vec dy = yv - ctx.Xs;
  return ctx.dS + ctx.Pt.dot(dx) - ctx.Ps.dot(dy) + 0.5 * dy.dot(ctx.Qyy * dy) + dx.dot(ctx.Qxy * dy) +
         0.5 * dx.dot(ctx.Qxx * dx);
}

cplx green_function(const KernelContext& ctx, std::span<const double> x, std::span<const double> y) {
  return ctx.prefactor * std::polar(1.0, kernel_phase(ctx, x, y) / ctx.hbar);
}

namespace {

// (m w / (2 pi i hbar sin(w tau)))^{1/2} continued through the caustics of a
// forward evolution by the Maslov phase exp(-i pi k / 2), k = floor(w tau / pi).
cplx oscillator_prefactor(double m, double w, double hbar, double tau) {
  const double sn = std::sin(w * tau);
  if (std::abs(sn) < 1e-14) throw CausticError("closed-form kernel evaluated at a caustic");
  const double k = std::floor(w * std::abs(tau) / kPi);
  const double modulus = std::sqrt(m * w / (2.0 * kPi * hbar * std::abs(sn)));
  const double sign = tau > 0 ? 1.0 : -1.0;
  return modulus * std::polar(1.0, -sign * (0.25 * kPi + 0.5 * kPi * k));
}

}  // namespace

cplx closed_form_kernel_1d(const Example1DParams& p, double kappa_tilde, double hbar, const Vec& zs, const Vec& zt,
                           double dS, double x, double y, double t, double s) {
  const double w2 = p.Omega_sq(kappa_tilde);
  if (!(w2 > 0.0)) throw ModelError("Omega^2 must be positive");
  const double w = std::sqrt(w2);
  const double tau = t - s;
  const double dx = x - zt(1);
  const double dy = y - zs(1);
  const double sn = std::sin(w * tau), cs = std::cos(w * tau);
  const double quad = p.m * w / (2.0 * sn) * ((dx * dx + dy * dy) * cs - 2.0 * dx * dy);
  const double phase = dS + zt(0) * dx - zs(0) * dy + quad;
  return oscillator_prefactor(p.m, w, hbar, tau) * std::polar(1.0, phase / hbar);
}

cplx closed_form_kernel_3d(const Example3DParams& p, double kappa_tilde, double hbar, const Vec& zs, const Vec& zt,
                           double dS, std::span<const double> x, std::span<const double> y, double t, double s) {
  const double w1s = p.omega1_sq(kappa_tilde), w2s = p.omega2_sq(kappa_tilde);
  if (!(w1s > 0.0) || !(w2s > 0.0)) throw ModelError("omega_1^2 and omega_2^2 must be positive");
  const double w1 = std::sqrt(w1s), w2 = std::sqrt(w2s);
  const double tau = t - s;
  const double half_rot = 0.5 * p.omega_H() * tau;
  double dx[3], dy[3];
  for (int j = 0; j < 3; ++j) {
    dx[j] = x[static_cast<std::size_t>(j)] - zt(3 + j);
    dy[j] = y[static_cast<std::size_t>(j)] - zs(3 + j);
  }
  const double s1 = std::sin(w1 * tau), c1 = std::cos(w1 * tau);
  const double s2 = std::sin(w2 * tau), c2 = std::cos(w2 * tau);
  const double transverse =
      p.m * w1 / (2.0 * s1) *
          ((dx[0] * dx[0] + dx[1] * dx[1] + dy[0] * dy[0] + dy[1] * dy[1]) * c1 -
           2.0 * std::cos(half_rot) * (dx[0] * dy[0] + dx[1] * dy[1])) -
      p.m * w1 * std::sin(half_rot) / s1 * (dx[0] * dy[1] - dx[1] * dy[0]);
  const double longitudinal = p.m * w2 / (2.0 * s2) * ((dx[2] * dx[2] + dy[2] * dy[2]) * c2 - 2.0 * dx[2] * dy[2]);
  double linear = 0.0;
  for (int j = 0; j < 3; ++j) linear += zt(j) * dx[j] - zs(j) * dy[j];
  const cplx f1 = oscillator_prefactor(p.m, w1, hbar, tau);
  const cplx pref = f1 * f1 * oscillator_prefactor(p.m, w2, hbar, tau);
  return pref * std::polar(1.0, (dS + linear + transverse + longitudinal) / hbar);
}

void write_kernel_csv(const std::filesystem::path& path, const KernelContext& ctx,
                      const std::vector<std::vector<double>>& xs, const std::vector<std::vector<double>>& ys) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  for (int d = 0; d < ctx.n; ++d) os << 'x' << d << ',';
  for (int d = 0; d < ctx.n; ++d) os << 'y' << d << ',';
  os << "re,im\n";
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      const cplx g = green_function(ctx, x, y);
      for (double v : x) os << format_double(v) << ',';
      for (double v : y) os << format_double(v) << ',';
      os << format_double(g.real()) << ',' << format_double(g.imag()) << '\n';
    }
  }
}

}  // namespace gpx
