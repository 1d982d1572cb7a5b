// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// An optional argument list selects criteria by number, e.g. `acceptance 1 4`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gpx/evolution.hpp"
#include "gpx/hes.hpp"
#include "gpx/kernel.hpp"
#include "gpx/moments.hpp"
#include "gpx/reference.hpp"
#include "gpx/symmetry.hpp"

using namespace gpx;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void need(bool ok, const std::string& what, double value, double bound) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s%s=%.3e (%s %.1e)", detail.empty() ? "" : "; ", what.c_str(), value,
                  ok ? "ok" : "BREACH", bound);
    detail += buf;
    pass = pass && ok;
  }
  void at_most(const std::string& what, double value, double bound) {
    need(std::isfinite(value) && value <= bound, what, value, bound);
  }
  void at_least(const std::string& what, double value, double bound) {
    need(std::isfinite(value) && value >= bound, what, value, bound);
  }
};

Example1DParams params_1d() {
  Example1DParams p;
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

const double kKappa = 0.5;

QuadraticModel model_1d() { return make_example_1d(params_1d(), kKappa); }

std::vector<Axis> grid_1d(std::size_t n = 2048) { return {Axis{-16.0, 16.0, n}}; }

GridState gaussian_1d(double x0, double p0, double sigma, double chirp = 0.0,
                      const std::vector<Axis>& axes = grid_1d()) {
  return gaussian_state(axes, Vec::Constant(1, x0), Vec::Constant(1, p0), Vec::Constant(1, sigma), 1.0, 0.0, chirp);
}

GridState acceptance_state() { return gaussian_1d(1.0, 0.3, 0.6); }

EvolveOptions on_grid(const std::vector<Axis>& axes) {
  EvolveOptions o;
  o.output_axes = axes;
  return o;
}

// Least-squares slope of log(err) against log(dt).
double loglog_slope(const std::vector<double>& h, const std::vector<double>& e) {
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

double wrap(double phi) { return std::remainder(phi, 2.0 * kPi); }

// 1. evolve against the split-step oracle.
Outcome criterion_1() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const QuadraticModel model = model_1d();
  const GridState psi = acceptance_state();
  const double t = 2.0;
  const GridState exact = evolve(model, psi, t, on_grid(psi.axes));
  const std::vector<double> dts{8e-4, 4e-4, 2e-4, 1e-4};
  std::vector<double> errs;
  for (double dt : dts) {
    OracleConfig cfg;
    cfg.dt = dt;
    errs.push_back(l2_distance(split_step_evolve(model, psi, t, cfg), exact));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.at_most("l2(dt=1e-4)", errs.back(), 1e-6);
  o.at_least("slope", loglog_slope(dts, errs), 1.9);
  o.at_most("runtime_s", secs, 120.0);
  return o;
}

// 2. Moments of evolved states follow the moment equations.
Outcome criterion_2() {
  Outcome o;
  const QuadraticModel model = model_1d();
  const GridState psi = acceptance_state();
  const Constants k0 = constants_of_motion(model, psi);
  const MomentTrajectory traj = integrate_hes(model, k0.kappa_tilde, k0.g, 0.0, 2.0);
  double worst = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double t = 2.0 * i / 200.0;
    const GridState st = evolve(model, psi, t);
    const Vec z = first_moments(st);
    const Mat D = second_moments(st, z);
    const MomentPoint g = traj.at(t);
    worst = std::max({worst, (z - g.z).cwiseAbs().maxCoeff(), (D - g.Delta).cwiseAbs().maxCoeff()});
  }
  o.at_most("max_moment_error", worst, 1e-6);
  return o;
}

// 3. Inverse evolution on random trajectory-concentrated states.
Outcome criterion_3() {
  Outcome o;
  const QuadraticModel model = model_1d();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double x0 = -2.0 + 4.0 * u(rng);
    const double p0 = -1.0 + 2.0 * u(rng);
    const double sigma = 0.5 + 0.5 * u(rng);
    const double chirp = -0.5 + u(rng);
    const double t = 0.5 + 2.0 * u(rng);
    const GridState psi = gaussian_1d(x0, p0, sigma, chirp);
    const GridState fwd = evolve(model, psi, t);
    const GridState back = evolve_inverse(model, fwd, 0.0, on_grid(psi.axes));
    worst = std::max(worst, l2_distance(back, psi));
  }
  o.at_most("max_roundtrip_l2", worst, 1e-8);
  return o;
}

// 4. Group law, including a composition across a conjugate point.
Outcome criterion_4() {
  Outcome o;
  const QuadraticModel model = model_1d();
  const GridState psi = acceptance_state();
  const EvolveOptions opts = on_grid(psi.axes);
  const GridState direct = evolve(model, psi, 2.0, opts);
  const GridState composed = evolve_composed(model, psi, 1.0, 2.0, opts);
  o.at_most("midpoint_l2", l2_distance(direct, composed), 1e-7);

  // Omega ~ 1.05 here, so [0, 4] contains the first conjugate time pi/Omega.
  const double kt = constants_of_motion(model, psi).kappa_tilde;
  const double conj = kPi / std::sqrt(params_1d().Omega_sq(kt));
  o.at_most("conjugate_time_inside", conj < 4.0 ? 0.0 : 1.0, 0.0);
  const GridState across = evolve_composed(model, psi, 2.0, 4.0, opts);
  OracleConfig cfg;
  cfg.dt = 1e-4;
  o.at_most("across_caustic_vs_oracle", l2_distance(across, split_step_evolve(model, psi, 4.0, cfg)), 1e-5);
  return o;
}

// 5. Superposition principle with (c1, c2) = (0.6, 0.8).
Outcome criterion_5() {
  Outcome o;
  const QuadraticModel model = model_1d();
  const GridState psi1 = gaussian_1d(1.0, 0.3, 0.6);
  const GridState psi2 = gaussian_1d(-0.5, -0.2, 0.8, 0.2);
  const double t = 1.5;
  const GridState Psi1 = evolve(model, psi1, t);
  const GridState Psi2 = evolve(model, psi2, t);
  const GridState mixed = linear_combination(0.6, psi1, 0.8, psi2);
  const GridState direct = evolve(model, mixed, t);
  const GridState via = superpose(model, Psi1, Psi2, 0.6, 0.8, 0.0, on_grid(direct.axes));
  o.at_most("superposition_l2", l2_distance(via, direct), 1e-7);
  return o;
}

// 6. Fock hierarchy generated by the ladder operators.
Outcome criterion_6() {
  Outcome o;
  const QuadraticModel model = model_1d();
  const double kt = model.kappa;
  const double t = 0.5;
  const auto axes = recentered(grid_1d(), steady_orbit(params_1d(), kt, t).tail(1));
  EvolveOptions opts;
  opts.kappa_tilde = kt;
  std::vector<GridState> closed;
  for (int n = 0; n <= 5; ++n) closed.push_back(fock_state(model, n, t, axes, kt));
  double chain_err = 0.0, coef_err = 0.0, ortho = 0.0;
  GridState chain = closed[0];
  for (int n = 0; n < 5; ++n) {
    const auto k = static_cast<std::size_t>(n);
    const double root = std::sqrt(n + 1.0);
    const cplx up = inner_product(closed[k + 1], ladder_apply(model, +1, closed[k], 0.0, opts));
    const cplx down = inner_product(closed[k], ladder_apply(model, -1, closed[k + 1], 0.0, opts));
    coef_err = std::max({coef_err, std::abs(up - root) / root, std::abs(down - root) / root});
    chain = scaled(ladder_apply(model, +1, chain, 0.0, opts), 1.0 / root);
    chain_err = std::max(chain_err, l2_distance(chain, closed[k + 1]));
  }
  for (std::size_t m = 0; m < closed.size(); ++m) {
    for (std::size_t n = 0; n < closed.size(); ++n) {
      ortho = std::max(ortho, std::abs(inner_product(closed[m], closed[n]) - (m == n ? 1.0 : 0.0)));
    }
  }
  o.at_most("chain_l2", chain_err, 1e-7);
  o.at_most("coefficient_rel", coef_err, 1e-6);
  o.at_most("orthonormality", ortho, 1e-8);
  return o;
}

// 7. Quasi-energies from one drive period, plus the harmonic limit.
Outcome criterion_7() {
  Outcome o;
  const QuadraticModel model = model_1d();
  const Example1DParams p = params_1d();
  const double kt = model.kappa;
  const double T = 2.0 * kPi / p.omega;
  const auto axes = recentered(grid_1d(), steady_orbit(p, kt, 0.0).tail(1));
  EvolveOptions opts = on_grid(axes);
  opts.kappa_tilde = kt;
  double worst = 0.0;
  for (int n = 0; n <= 2; ++n) {
    const GridState psi0 = fock_state(model, n, 0.0, axes, kt);
    const GridState psiT = evolve(model, psi0, T, opts);
    const double phase = std::arg(inner_product(psi0, psiT));
    worst = std::max(worst, std::abs(wrap(phase + quasi_energy(model, n, kt) * T / model.hbar)));
  }
  o.at_most("max_phase_error", worst, 1e-5);

  Example1DParams h = p;
  h.E = 0.0;
  const QuadraticModel harmonic = make_example_1d(h, 0.0);
  const double w0 = std::sqrt(h.k / h.m);
  double formula = 0.0;
  for (int n = 0; n <= 5; ++n) {
    formula = std::max(formula, std::abs(quasi_energy(harmonic, n, 0.0) - w0 * (n + 0.5)));
  }
  o.at_most("harmonic_limit", formula, 1e-12);
  return o;
}

// Free-particle kernel sqrt(m / (2 pi i hbar tau)) exp(i m (x-y)^2 / (2 hbar tau)).
cplx free_kernel(double m, double hbar, double tau, double x, double y) {
  return std::sqrt(m / (2.0 * kPi * kI * hbar * tau)) * std::exp(kI * m * (x - y) * (x - y) / (2.0 * hbar * tau));
}

QuadraticModel free_model(double m) {
  nlohmann::json spec = {{"example", "custom"}, {"n", 1}, {"hbar", 1.0}, {"kappa", 0.0}, {"mass", m},
                         {"Hzz", {{1.0 / m, 0.0}, {0.0, 0.0}}}};
  return build_model(spec);
}

// 8. Generic kernel assembly against closed forms.
Outcome criterion_8() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  {
    const QuadraticModel model = model_1d();
    const GridState psi = acceptance_state();
    const Constants k0 = constants_of_motion(model, psi);
    const double limit = kPi / std::sqrt(params_1d().Omega_sq(k0.kappa_tilde));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double tau = limit * (0.05 + 0.9 * u(rng));
      const KernelContext ctx = make_kernel_context(model, k0.kappa_tilde, k0.g, 0.0, tau);
      const double x = ctx.Xt(0) + 6.0 * (u(rng) - 0.5);
      const double y = ctx.Xs(0) + 6.0 * (u(rng) - 0.5);
      const Vec zs = (Vec(2) << ctx.Ps, ctx.Xs).finished();
      const Vec zt = (Vec(2) << ctx.Pt, ctx.Xt).finished();
      const cplx ref = closed_form_kernel_1d(params_1d(), k0.kappa_tilde, 1.0, zs, zt, ctx.dS, x, y, tau, 0.0);
      const double xs[1] = {x}, ys[1] = {y};
      worst = std::max(worst, std::abs(green_function(ctx, xs, ys) - ref) / std::abs(ref));
    }
    o.at_most("kernel_1d_rel", worst, 1e-9);
  }

  {
    Example3DParams p;
    p.m = 1.0;
    p.e = 1.0;
    p.c_light = 1.0;
    p.H_field = 0.6;
    p.E_field = 0.2;
    p.omega = 0.7;
    p.k = 1.0;
    p.V0 = 0.3;
    p.gamma = 2.0;
    const QuadraticModel model = make_example_3d(p, 0.4);
    const std::vector<Axis> axes(3, Axis{-8.0, 8.0, 32});
    const GridState psi = gaussian_state(axes, Vec::Constant(3, 0.5), Vec::Constant(3, 0.1), Vec::Constant(3, 0.8), 1.0);
    const Constants k0 = constants_of_motion(model, psi);
    const double kt = k0.kappa_tilde;
    const double limit = kPi / std::sqrt(std::max(p.omega1_sq(kt), p.omega2_sq(kt)));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double tau = limit * (0.05 + 0.9 * u(rng));
      const KernelContext ctx = make_kernel_context(model, kt, k0.g, 0.0, tau);
      double x[3], y[3];
      for (int d = 0; d < 3; ++d) {
        x[d] = ctx.Xt(d) + 6.0 * (u(rng) - 0.5);
        y[d] = ctx.Xs(d) + 6.0 * (u(rng) - 0.5);
      }
      const Vec zs = (Vec(6) << ctx.Ps, ctx.Xs).finished();
      const Vec zt = (Vec(6) << ctx.Pt, ctx.Xt).finished();
      const cplx ref = closed_form_kernel_3d(p, kt, 1.0, zs, zt, ctx.dS, x, y, tau, 0.0);
      worst = std::max(worst, std::abs(green_function(ctx, x, y) - ref) / std::abs(ref));
    }
    o.at_most("kernel_3d_rel", worst, 1e-9);
  }

  {
    const double m = 1.7;
    const QuadraticModel model = free_model(m);
    MomentPoint g;
    g.z = Vec::Zero(2);
    g.Delta = Mat::Identity(2, 2);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double tau = 0.1 + 3.0 * u(rng);
      const KernelContext ctx = make_kernel_context(model, 0.0, g, 0.0, tau);
      const double x[1] = {4.0 * (u(rng) - 0.5)}, y[1] = {4.0 * (u(rng) - 0.5)};
      const cplx ref = free_kernel(m, 1.0, tau, x[0], y[0]);
      worst = std::max(worst, std::abs(green_function(ctx, x, y) - ref) / std::abs(ref));
    }
    o.at_most("free_particle_rel", worst, 1e-9);
  }

  {
    // Short-time limit: U(tau) phi against exp(-i tau H(tau/2)) phi, Taylor
    // expanded to third order, on the linear (kappa = 0) 1D example.
    const double tau = 1e-3;
    const QuadraticModel model = make_example_1d(params_1d(), 0.0);
    const GridState phi = acceptance_state();
    const GridState evolved = evolve(model, phi, tau, on_grid(phi.axes));
    const double tm = 0.5 * tau;
    const Mat Q = model.Hzz(tm);
    const Vec L = model.Hz(tm);
    GridState term = phi, acc = phi;
    for (int k = 1; k <= 3; ++k) {
      term = scaled(apply_weyl_quadratic(term, Q, L, 0.0), -kI * tau / (model.hbar * k));
      acc = linear_combination(1.0, acc, 1.0, term);
    }
    o.at_most("delta_limit_l2", l2_distance(evolved, acc), 1e-6);
  }
  return o;
}

// 9. Symplecticity, norm conservation and the GPE residual.
Outcome criterion_9() {
  Outcome o;
  const QuadraticModel model = model_1d();
  const GridState psi = acceptance_state();
  const Constants k0 = constants_of_motion(model, psi);

  double defect = 0.0;
  for (double t : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    defect = std::max(defect, symplectic_defect(integrate_variations(model, k0.kappa_tilde, 0.0, t)));
  }
  o.at_most("symplectic_defect", defect, 1e-9);

  double drift = 0.0;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    drift = std::max(drift, std::abs(norm_squared(evolve(model, psi, t)) / k0.norm_sq - 1.0));
  }
  o.at_most("norm_drift", drift, 1e-8);

  const double tc = 1.0;
  const std::vector<double> dts{0.08, 0.04, 0.02, 0.01};
  const EvolveOptions opts = on_grid(recentered(psi.axes, constants_of_motion(model, evolve(model, psi, tc)).g.X(1)));
  std::vector<double> res;
  for (double dt : dts) {
    const std::array<GridState, 3> snaps{evolve(model, psi, tc - dt, opts), evolve(model, psi, tc, opts),
                                         evolve(model, psi, tc + dt, opts)};
    res.push_back(gpe_residual(model, snaps, dt));
  }
  o.at_least("residual_slope", loglog_slope(dts, res), 1.9);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 exactness vs split-step oracle", criterion_1},
      {"2 moments track the moment equations", criterion_2},
      {"3 inverse evolution round trip", criterion_3},
      {"4 group law and conjugate-point composition", criterion_4},
      {"5 superposition principle", criterion_5},
      {"6 Fock hierarchy via ladder operators", criterion_6},
      {"7 quasi-energies", criterion_7},
      {"8 kernel cross-checks", criterion_8},
      {"9 structural invariants", criterion_9},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(static_cast<int>(i) + 1)) continue;
    Outcome r;
    const auto start = std::chrono::steady_clock::now();
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s [%.1fs]: %s\n", r.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), secs,
                r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
