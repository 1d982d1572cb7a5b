#pragma once

#include <array>
#include <optional>

#include "gpx/grid.hpp"
#include "gpx/model.hpp"

namespace gpx {

struct OracleConfig {
  double dt = 1e-3;
  /// Overrides kappa * ||psi||^2 in the mean-field potential.
  std::optional<double> kappa_tilde;
  /// Relative norm drift that marks the run as unstable.
  double max_norm_drift = 1e-6;
};

/// Strang split-step Fourier integration of the nonlocal GPE from psi.t to t.
/// The nonlocal term reduces to a quadratic potential built from the current
/// position mean and variance. Requires a kinetic term p.Hpp.p/2 only (no
/// p-x coupling, no linear p term) and interaction matrices with position
/// blocks only.
GridState split_step_evolve(const QuadraticModel& model, const GridState& psi, double t, const OracleConfig& cfg);

/// Applies the Weyl-quantized operator <z,Q z>/2 + <L,z> + c0 to psi, z = (p, x).
GridState apply_weyl_quadratic(const GridState& psi, const Mat& Q, const Vec& L, double c0);

/// L2 norm of -i hbar dPsi/dt + h(t, Psi) Psi at the middle snapshot, with a
/// central difference in time. The mean-field operator is built from the
/// middle snapshot's moments; kappa_tilde defaults to kappa * ||Psi||^2.
double gpe_residual(const QuadraticModel& model, const std::array<GridState, 3>& snapshots, double dt,
                    std::optional<double> kappa_tilde = std::nullopt);

}  // namespace gpx
