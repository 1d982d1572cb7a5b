#include "gpx/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

namespace gpx {

namespace {

namespace odeint = boost::numeric::odeint;
using Stepper = odeint::runge_kutta_dopri5<Vec, double, Vec, double, odeint::vector_space_algebra>;

bool finite(const Vec& v) { return v.allFinite(); }

struct System {
  const OdeRhs& rhs;
  void operator()(const Vec& y, Vec& dydt, double t) const {
    dydt.resize(y.size());
    rhs(t, y, dydt);
  }
};

}  // namespace

Vec dopri5_step(const OdeRhs& rhs, double t, const Vec& y, double h) {
  Stepper stepper;
  Vec out = y;
  stepper.do_step(System{rhs}, out, t, h);
  return out;
}

OdeSolution::OdeSolution(OdeRhs rhs, OdeProjection projection, std::vector<double> t, std::vector<Vec> y)
    : rhs_(std::move(rhs)), projection_(std::move(projection)), t_(std::move(t)), y_(std::move(y)) {}

Vec OdeSolution::at(double t) const {
  const bool forward = t_.back() >= t_.front();
  const double lo = std::min(t_.front(), t_.back());
  const double hi = std::max(t_.front(), t_.back());
  const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
  if (t < lo - slack || t > hi + slack) {
    throw IntegrationError("trajectory queried outside its range at t=" + std::to_string(t));
  }
  // Nodes are monotone in the integration direction.
  std::size_t i;
  if (forward) {
    i = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin());
  } else {
    i = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t, std::greater<>()) - t_.begin());
  }
  i = std::min(std::max<std::size_t>(i, 1), t_.size() - 1);
  const std::size_t left = i - 1;
  const std::size_t right = i;
  const std::size_t node = std::abs(t - t_[left]) <= std::abs(t_[right] - t) ? left : right;
  if (t == t_[node]) return y_[node];
  Vec y = dopri5_step(rhs_, t_[node], y_[node], t - t_[node]);
  if (projection_) projection_(y);
  return y;
}

Vec OdeSolution::derivative(double t) const {
  const Vec y = at(t);
  Vec dy(y.size());
  rhs_(t, y, dy);
  return dy;
}

OdeSolution integrate_ode(const OdeRhs& rhs, double t0, double t1, const Vec& y0, const OdeTolerance& tol,
                          const OdeProjection& projection, std::size_t max_steps) {
  std::vector<double> ts{t0};
  std::vector<Vec> ys{y0};
  if (!finite(y0)) throw IntegrationError("non-finite initial state");
  if (t1 == t0) return OdeSolution(rhs, projection, ts, ys);

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  Vec f0(y0.size());
  rhs(t0, y0, f0);
  if (!finite(f0)) throw IntegrationError("non-finite right-hand side at t=" + std::to_string(t0));

  // Initial step from the usual scale heuristic.
  const Vec scale0 = tol.atol + tol.rtol * y0.array().abs();
  const double d0 = (y0.array() / scale0.array()).matrix().norm() / std::sqrt(double(y0.size()));
  const double d1 = (f0.array() / scale0.array()).matrix().norm() / std::sqrt(double(y0.size()));
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h = std::min(h, span);

  auto controlled = odeint::make_controlled(tol.atol, tol.rtol, Stepper());
  const System sys{rhs};
  double t = t0;
  double dt = dir * h;
  Vec y = y0;
  Vec dydt = f0;
  std::size_t steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > max_steps) throw IntegrationError("too many integration steps");
    const bool last = std::abs(dt) >= std::abs(t1 - t);
    if (last) dt = t1 - t;
    if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t))) throw IntegrationError("step size underflow");
    Vec trial = y, dtrial = dydt;
    double t_trial = t, dt_trial = dt;
    if (controlled.try_step(sys, trial, dtrial, t_trial, dt_trial) == odeint::fail) {
      dt = dt_trial;
      continue;
    }
    if (!finite(trial) || !finite(dtrial)) {
      dt *= 0.25;
      continue;
    }
    t = last ? t1 : t_trial;
    if (projection) {
      projection(trial);
      rhs(t, trial, dtrial);
    }
    y = std::move(trial);
    dydt = std::move(dtrial);
    ts.push_back(t);
    ys.push_back(y);
    dt = dt_trial;
  }
  return OdeSolution(rhs, projection, std::move(ts), std::move(ys));
}

}  // namespace gpx
