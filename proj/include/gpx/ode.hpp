#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "gpx/types.hpp"

namespace gpx {

struct OdeTolerance {
  double rtol = 1e-12;
  double atol = 1e-14;
};

using OdeRhs = std::function<void(double t, const Vec& y, Vec& dydt)>;
/// Applied to every accepted state (e.g. to re-symmetrize matrix blocks).
using OdeProjection = std::function<void(Vec& y)>;

/// Accepted-step mesh of an adaptive Dormand-Prince 5(4) run with a dense accessor.
class OdeSolution {
 public:
  OdeSolution() = default;
  OdeSolution(OdeRhs rhs, OdeProjection projection, std::vector<double> t, std::vector<Vec> y);

  const std::vector<double>& times() const { return t_; }
  const std::vector<Vec>& states() const { return y_; }
  double t0() const { return t_.front(); }
  double t1() const { return t_.back(); }
  const Vec& final_state() const { return y_.back(); }

  /// State at any t between t0 and t1: one Dormand-Prince step from the
  /// nearest mesh node. The step is never longer than an accepted one, so the
  /// local error stays within the run's tolerance.
  Vec at(double t) const;
  Vec derivative(double t) const;

 private:
  OdeRhs rhs_;
  OdeProjection projection_;
  std::vector<double> t_;
  std::vector<Vec> y_;
};

/// Integrates from t0 to t1 (either direction). Throws IntegrationError on a
/// non-finite right-hand side, step-size underflow or too many steps.
OdeSolution integrate_ode(const OdeRhs& rhs, double t0, double t1, const Vec& y0, const OdeTolerance& tol,
                          const OdeProjection& projection = {}, std::size_t max_steps = 2'000'000);

/// Single Dormand-Prince step of size h; returns the fifth-order solution.
Vec dopri5_step(const OdeRhs& rhs, double t, const Vec& y, double h);

}  // namespace gpx
