#pragma once

#include <cstddef>
#include <vector>

#include "gpx/grid.hpp"

namespace gpx {

/// Angular wavenumbers 2*pi*j/L in FFT order; the Nyquist mode gets -pi/h.
std::vector<double> wavenumbers(const Axis& axis);

/// Unnormalized in-place DFT along one axis of a row-major array.
/// sign = -1 forward, +1 backward.
void fft_axis(std::vector<cplx>& data, const std::vector<std::size_t>& shape, int axis, int sign);

/// Unnormalized in-place n-dimensional DFT.
void fft_all(std::vector<cplx>& data, const std::vector<std::size_t>& shape, int sign);

/// Reusable n-dimensional transform for repeated use on same-shaped arrays.
class FftPlan {
 public:
  FftPlan(const std::vector<std::size_t>& shape, int sign);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  /// Unnormalized in-place transform; data.size() must match the planned shape.
  void execute(std::vector<cplx>& data) const;

 private:
  void* plan_ = nullptr;
  std::size_t size_ = 0;
};

/// Trigonometric interpolation onto `factor` times as many points along `axis`
/// (same periodic box). The Nyquist coefficient is split between +N/2 and -N/2.
GridState spectral_refine(const GridState& state, int axis, std::size_t factor);

/// Multiplies the spectrum along `axis` by exp(i k shift): psi(x) -> psi(x + shift).
void spectral_shift(GridState& state, int axis, double shift);

/// -i hbar d/dx along `axis`, computed spectrally. The Nyquist mode is dropped.
GridState apply_momentum(const GridState& state, int axis);

}  // namespace gpx
