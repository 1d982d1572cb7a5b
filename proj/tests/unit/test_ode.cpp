#include <doctest.h>

#include <cmath>

#include "gpx/ode.hpp"

using namespace gpx;

namespace {

// y'' = -y as a first-order system.
void oscillator(double, const Vec& y, Vec& dy) {
  dy.resize(2);
  dy(0) = y(1);
  dy(1) = -y(0);
}

}  // namespace

TEST_CASE("Dormand-Prince reaches the requested accuracy forwards and backwards") {
  const Vec y0 = (Vec(2) << 1.0, 0.0).finished();
  const OdeTolerance tol;
  const OdeSolution fwd = integrate_ode(oscillator, 0.0, 10.0, y0, tol);
  CHECK(std::abs(fwd.final_state()(0) - std::cos(10.0)) < 1e-10);
  CHECK(std::abs(fwd.final_state()(1) + std::sin(10.0)) < 1e-10);
  const OdeSolution back = integrate_ode(oscillator, 0.0, -3.0, y0, tol);
  CHECK(std::abs(back.final_state()(0) - std::cos(3.0)) < 1e-11);
}

TEST_CASE("dense access between mesh nodes keeps the step accuracy") {
  const Vec y0 = (Vec(2) << 0.0, 1.0).finished();
  const OdeSolution sol = integrate_ode(oscillator, 0.0, 5.0, y0, {});
  for (double t : {0.123, 1.7, 3.33333, 4.999}) {
    CHECK(std::abs(sol.at(t)(0) - std::sin(t)) < 1e-11);
    CHECK(std::abs(sol.derivative(t)(0) - std::cos(t)) < 1e-11);
  }
  CHECK_THROWS_AS(sol.at(6.0), IntegrationError);
}

TEST_CASE("a non-finite right-hand side is reported") {
  const OdeRhs blowup = [](double, const Vec& y, Vec& dy) { dy = y.array().square() * 1e300; };
  CHECK_THROWS_AS(integrate_ode(blowup, 0.0, 1.0, Vec::Ones(1), {}), IntegrationError);
}

TEST_CASE("the projection hook runs on accepted states") {
  int calls = 0;
  const OdeProjection count = [&](Vec&) { ++calls; };
  const OdeSolution sol = integrate_ode(oscillator, 0.0, 1.0, Vec::Ones(2), {}, count);
  CHECK(calls >= static_cast<int>(sol.times().size()) - 1);
}
