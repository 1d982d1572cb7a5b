#pragma once

#include "gpx/grid.hpp"
#include "gpx/hes.hpp"
#include "gpx/model.hpp"

namespace gpx {

struct MomentOptions {
  /// Maximum fraction of the mass in the outer 5% slab at each face.
  double tail_tol = 1e-10;
  /// Maximum fraction of the spectral mass in the top 10% of |k| per axis.
  double spectral_tol = 1e-12;
  bool check = true;
};

/// Moments of a grid state bundled with its norm and effective coupling.
struct Constants {
  MomentPoint g;
  double norm_sq = 0.0;
  double kappa_tilde = 0.0;
};

/// Throws ResolutionError if the state has boundary or spectral tails above tolerance.
void check_resolved(const GridState& state, const MomentOptions& opts = {});

/// Largest boundary-slab and spectral-tail fractions over all axes.
struct TailReport {
  double boundary = 0.0;
  double spectral = 0.0;
};
TailReport tail_fractions(const GridState& state);

double norm_squared(const GridState& state, const MomentOptions& opts = {});
/// (<p>, <x>) divided by ||psi||^2.
Vec first_moments(const GridState& state, const MomentOptions& opts = {});
/// Weyl-symmetrized centred second moments about z.
Mat second_moments(const GridState& state, const Vec& z, const MomentOptions& opts = {});
Mat second_moments(const GridState& state, const MomentOptions& opts = {});

/// kappa_tilde defaults to kappa * ||psi||^2.
Constants constants_of_motion(const QuadraticModel& model, const GridState& state, const MomentOptions& opts = {});

}  // namespace gpx
