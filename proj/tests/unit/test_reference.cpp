#include <doctest.h>

#include "gpx/moments.hpp"
#include "gpx/reference.hpp"
#include "gpx/symmetry.hpp"
#include "helpers.hpp"

using namespace gpx;

TEST_CASE("split-step spreading of a free packet") {
  const double m = 1.3, sigma = 0.6, t = 2.0;
  const GridState psi = testing::packet(0.0, 0.5, sigma, 0.0, testing::line(-24, 24, 1024));
  OracleConfig cfg;
  cfg.dt = 0.05;
  const GridState out = split_step_evolve(testing::free_model(m), psi, t, cfg);
  CHECK(second_moments(out)(1, 1) == doctest::Approx(sigma * sigma + t * t / (4.0 * m * m * sigma * sigma)).epsilon(1e-8));
  CHECK(first_moments(out)(1) == doctest::Approx(0.5 * t / m).epsilon(1e-8));
}

TEST_CASE("split-step coherent state and norm") {
  const GridState psi = testing::packet(1.0, 0.0, std::sqrt(0.5), 0.0, testing::line(-12, 12, 512));
  OracleConfig cfg;
  cfg.dt = 1e-4;
  const double t = 2.0;
  const GridState out = split_step_evolve(testing::harmonic_model(1.0), psi, t, cfg);
  const Vec z = first_moments(out);
  CHECK(std::abs(z(0) + std::sin(t)) < 1e-8);
  CHECK(std::abs(z(1) - std::cos(t)) < 1e-8);
  CHECK(std::abs(norm_squared(out) - norm_squared(psi)) < 1e-11);
}

TEST_CASE("split-step input checks") {
  const GridState psi = testing::packet(1.0, 0.0, 0.6);
  OracleConfig coarse;
  coarse.dt = 1.0;
  CHECK_THROWS_AS(split_step_evolve(testing::harmonic_model(1.0), psi, 2.0, coarse), ConfigError);
  const QuadraticModel magnetic = make_example_3d(testing::example3d_params(), 0.0);
  const std::vector<Axis> axes(3, Axis{-6.0, 6.0, 16});
  const GridState p3 = gaussian_state(axes, Vec::Zero(3), Vec::Zero(3), Vec::Ones(3), 1.0);
  CHECK_THROWS_AS(split_step_evolve(magnetic, p3, 0.5, OracleConfig{}), ModelError);
}

TEST_CASE("GPE residual of Fock solutions converges at second order") {
  const QuadraticModel model = testing::example_model();
  const Example1DParams p = testing::example_params();
  const auto axes = recentered(testing::line(-12, 12, 512), steady_orbit(p, 0.5, 0.0).tail(1));
  std::vector<double> dts{0.04, 0.02, 0.01}, res;
  for (double dt : dts) {
    const std::array<GridState, 3> snaps{fock_state(model, 1, -dt, axes), fock_state(model, 1, 0.0, axes),
                                         fock_state(model, 1, dt, axes)};
    res.push_back(gpe_residual(model, snaps, dt));
  }
  CHECK(testing::loglog_slope(dts, res) >= 1.9);

  // A non-solution leaves an O(1) residual.
  const GridState f = fock_state(model, 1, 0.0, axes);
  const GridState g = sample_state(axes, 0.0, 1.0, [&](std::span<const double> x) { return std::exp(0.3 * kI * x[0]); });
  GridState kicked = f;
  for (std::size_t i = 0; i < kicked.size(); ++i) kicked.data[i] *= g.data[i];
  const double dt = 0.01;
  const std::array<GridState, 3> bad{fock_state(model, 1, -dt, axes), kicked, fock_state(model, 1, dt, axes)};
  CHECK(gpe_residual(model, bad, dt) > 1e-3);
}
