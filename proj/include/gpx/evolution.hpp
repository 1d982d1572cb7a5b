#pragma once

#include <optional>

#include "gpx/kernel.hpp"
#include "gpx/moments.hpp"
#include "gpx/quadrature.hpp"

namespace gpx {

struct EvolveOptions {
  OdeTolerance ode;
  KernelOptions kernel;
  QuadratureOptions quadrature;
  MomentOptions moments;
  /// Output grid; defaults to the input grid recentred at X(t).
  std::optional<std::vector<Axis>> output_axes;
  /// Overrides kappa * ||psi||^2.
  std::optional<double> kappa_tilde;
  /// Splits are chosen so that sigma_min(A_xp) >= min_rho |tau| sigma_min(h_pp) on each.
  double min_rho = 0.5;
  int rho_samples = 64;
  int max_splits = 512;
};

struct SplitInfo {
  double t0 = 0.0;
  double t1 = 0.0;
  /// Smallest det A_xp / (tau^n det h_pp) seen while tracking the prefactor branch.
  double min_det_ratio = 1.0;
  double dS = 0.0;
  cplx prefactor{0.0, 0.0};
  QuadratureStats quadrature;
};

struct EvolveResult {
  GridState state;
  Constants constants;
  MomentTrajectory trajectory;
  std::vector<SplitInfo> splits;
};

/// Splits of [s, t] such that every piece is well away from a conjugate point.
std::vector<double> plan_splits(const QuadraticModel& model, double kappa_tilde, double s, double t,
                                const EvolveOptions& opts = {});

/// Exact evolution of psi (at psi.t) to time t; t may precede psi.t.
EvolveResult evolve_detailed(const QuadraticModel& model, const GridState& psi, double t,
                             const EvolveOptions& opts = {});
GridState evolve(const QuadraticModel& model, const GridState& psi, double t, const EvolveOptions& opts = {});

/// Pulls a solution known at Psi.t back to time s with constants computed from Psi.
GridState evolve_inverse(const QuadraticModel& model, const GridState& Psi, double s, const EvolveOptions& opts = {});

/// Evolves to r, recomputes the moments there, then continues to t. The
/// effective coupling of psi is kept for the second leg.
GridState evolve_composed(const QuadraticModel& model, const GridState& psi, double r, double t,
                          const EvolveOptions& opts = {});

/// U(t, c1 U^-1(s, Psi1) + c2 U^-1(s, Psi2)) with t = Psi1.t. Both pullbacks
/// land on `pullback_axes` if given, else on Psi1's grid centred between the
/// two pulled-back means.
GridState superpose(const QuadraticModel& model, const GridState& Psi1, const GridState& Psi2, cplx c1, cplx c2,
                    double s, const EvolveOptions& opts = {},
                    const std::optional<std::vector<Axis>>& pullback_axes = std::nullopt);

}  // namespace gpx
