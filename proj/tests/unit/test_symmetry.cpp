#include <doctest.h>

#include "gpx/evolution.hpp"
#include "gpx/moments.hpp"
#include "gpx/symmetry.hpp"
#include "helpers.hpp"

using namespace gpx;

namespace {

CVec cvec(cplx v) { return CVec::Constant(1, v); }

}  // namespace

TEST_CASE("Hermite functions are orthonormal") {
  const int n = 6;
  const double h = 0.01;
  Mat gram = Mat::Zero(n + 1, n + 1);
  for (double xi = -12.0; xi <= 12.0; xi += h) {
    const auto f = hermite_functions(n, xi);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) gram(i, j) += h * f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(j)];
  }
  CHECK((gram - Mat::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-12);
  for (double xi : {-1.3, 0.0, 0.7, 2.4}) {
    const double ref = (4.0 * xi * xi - 2.0) * std::exp(-0.5 * xi * xi) / std::sqrt(8.0 * std::sqrt(kPi));
    CHECK(hermite_functions(2, xi)[2] == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("Fock ground state of a plain oscillator") {
  const double w = 1.4, m = 0.8, t = 0.9;
  const QuadraticModel model = testing::harmonic_model(w, m);
  const GridState psi = fock_state(model, 0, t, testing::line(-10, 10, 256));
  const GridState ref = sample_state(psi.axes, t, 1.0, [&](std::span<const double> x) {
    return std::pow(m * w / kPi, 0.25) * std::exp(-0.5 * m * w * x[0] * x[0]) * std::exp(-0.5 * kI * w * t);
  });
  CHECK(l2_distance(psi, ref) < 1e-13);
}

TEST_CASE("ladder operators on Fock solutions") {
  const QuadraticModel model = testing::example_model();
  const Example1DParams p = testing::example_params();
  const double t = 0.7, kt = model.kappa;
  const auto axes = recentered(testing::line(-12, 12, 512), steady_orbit(p, kt, t).tail(1));
  EvolveOptions opts;
  opts.kappa_tilde = kt;
  const GridState f0 = fock_state(model, 0, t, axes), f1 = fock_state(model, 1, t, axes), f2 = fock_state(model, 2, t, axes);

  IntertwinedOperator id;
  id.c0 = 1.0;
  CHECK(l2_distance(apply_symmetry(model, id, f1, 0.0, opts), f1) < 1e-9);

  CHECK(l2_distance(ladder_apply(model, +1, f0, 0.0, opts), f1) < 1e-8);
  CHECK(l2_norm(ladder_apply(model, -1, f0, 0.0, opts)) < 1e-8);

  const GridState ud = ladder_apply(model, -1, ladder_apply(model, +1, f2, 0.0, opts), 0.0, opts);
  const GridState du = ladder_apply(model, +1, ladder_apply(model, -1, f2, 0.0, opts), 0.0, opts);
  CHECK(l2_distance(linear_combination(1.0, ud, -1.0, du), f2) < 1e-7);
}

TEST_CASE("one-parameter families") {
  const QuadraticModel model = testing::example_model();
  const GridState psi = evolve(model, testing::packet(0.5, 0.2, 0.6, 0.0, testing::line(-12, 12, 512)), 0.8);
  EvolveOptions opts;
  opts.output_axes = psi.axes;

  IntertwinedOperator boost;
  boost.cx = cvec(kI);
  CHECK(l2_distance(one_parameter_family(model, boost, 0.0, psi, 0.0, opts), psi) < 1e-9);

  IntertwinedOperator phase;
  phase.c0 = kI;
  CHECK(l2_distance(one_parameter_family(model, phase, 0.6, psi, 0.0, opts), scaled(psi, std::exp(0.6 * kI))) < 1e-9);

  const GridState once = one_parameter_family(model, boost, 0.5, psi, 0.0, opts);
  const GridState twice = one_parameter_family(model, boost, 0.3, once, 0.0, opts);
  CHECK(l2_distance(twice, one_parameter_family(model, boost, 0.8, psi, 0.0, opts)) < 1e-7);

  IntertwinedOperator squeeze;
  squeeze.cxx = CMat::Constant(1, 1, 1.0);
  CHECK_THROWS_AS(one_parameter_family(model, squeeze, 0.1, psi, 0.0, opts), ConfigError);
}

TEST_CASE("symmetry of a linear oscillator is the Heisenberg-evolved operator") {
  const QuadraticModel model = testing::harmonic_model(1.0);
  const GridState psi = evolve(model, testing::packet(0.8, -0.3, 0.5, 0.2, testing::line(-12, 12, 512)), 1.1);
  const double s = 0.4, tau = psi.t - s;
  IntertwinedOperator dp;
  dp.cp = cvec(1.0);
  IntertwinedOperator heis;
  heis.cp = cvec(std::cos(tau));
  heis.cx = cvec(std::sin(tau));
  CHECK(l2_distance(apply_symmetry(model, dp, psi, s), apply_operator(heis, psi)) < 1e-8);
}
