#pragma once

#include <vector>

#include "gpx/grid.hpp"
#include "gpx/kernel.hpp"

namespace gpx {

struct QuadratureOptions {
  /// OpenMP path with phase recurrences; false selects the direct serial reference.
  bool parallel = true;
  /// Upper bound on refined input samples.
  std::size_t max_refined_points = std::size_t{1} << 22;
  /// Upper bound on kernel evaluations (pairs times fibers).
  double max_pairs = 4e10;
  /// Spectral amplitude below this fraction of the peak counts as outside the band.
  double band_threshold = 1e-14;
  /// Input samples below this fraction of the peak amplitude are dropped.
  double support_threshold = 1e-16;
  /// Phase recurrence length before reseeding with sincos.
  int reseed = 64;
};

struct QuadratureStats {
  std::vector<std::size_t> refine_factor;  // per axis
  std::vector<std::size_t> support;        // trimmed input samples per axis
  std::vector<std::vector<int>> components;
  double pairs = 0.0;
};

/// Psi(x) = integral G(x, y) psi(y) dy on the output axes.
///
/// The input is refined by trigonometric interpolation until the chirped
/// integrand is resolved and the largest output frequency cannot alias,
/// then the sum is taken over coupled axis groups one at a time.
GridState apply_kernel(const KernelContext& ctx, const GridState& psi, const std::vector<Axis>& out_axes,
                       const QuadratureOptions& opts = {}, QuadratureStats* stats = nullptr);

}  // namespace gpx
