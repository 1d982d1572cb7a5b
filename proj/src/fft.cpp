#include "gpx/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace gpx {

namespace {

// The FFTW planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  fftw_plan p = nullptr;
  ~Plan() {
    if (p) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(p);
    }
  }
};

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

std::size_t product(const std::vector<std::size_t>& shape, std::size_t from, std::size_t to) {
  std::size_t n = 1;
  for (std::size_t i = from; i < to; ++i) n *= shape[i];
  return n;
}

}  // namespace

std::vector<double> wavenumbers(const Axis& axis) {
  const std::size_t n = axis.count;
  std::vector<double> k(n);
  const double base = 2.0 * kPi / axis.length();
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<double>(j);
    k[j] = (2 * j < n) ? base * jj : base * (jj - static_cast<double>(n));
  }
  return k;
}

void fft_axis(std::vector<cplx>& data, const std::vector<std::size_t>& shape, int axis, int sign) {
  const auto a = static_cast<std::size_t>(axis);
  const std::size_t len = shape[a];
  if (len <= 1) return;
  const std::size_t outer = product(shape, 0, a);
  const std::size_t inner = product(shape, a + 1, shape.size());
  int n = static_cast<int>(len);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.p = fftw_plan_many_dft(1, &n, static_cast<int>(inner), as_fftw(data.data()), nullptr,
                                static_cast<int>(inner), 1, as_fftw(data.data()), nullptr,
                                static_cast<int>(inner), 1, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  for (std::size_t o = 0; o < outer; ++o) {
    cplx* block = data.data() + o * len * inner;
    fftw_execute_dft(plan.p, as_fftw(block), as_fftw(block));
  }
}

void fft_all(std::vector<cplx>& data, const std::vector<std::size_t>& shape, int sign) {
  std::vector<int> dims(shape.begin(), shape.end());
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), as_fftw(data.data()),
                           as_fftw(data.data()), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_execute(plan.p);
}

FftPlan::FftPlan(const std::vector<std::size_t>& shape, int sign) {
  std::vector<int> dims(shape.begin(), shape.end());
  size_ = product(shape, 0, shape.size());
  std::vector<cplx> scratch(size_);
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), as_fftw(scratch.data()), as_fftw(scratch.data()),
                        sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void FftPlan::execute(std::vector<cplx>& data) const {
  if (data.size() != size_) throw GridMismatchError("FFT plan size does not match the data");
  fftw_execute_dft(static_cast<fftw_plan>(plan_), as_fftw(data.data()), as_fftw(data.data()));
}

GridState spectral_refine(const GridState& state, int axis, std::size_t factor) {
  if (factor <= 1) return state;
  const auto a = static_cast<std::size_t>(axis);
  const auto shape = state.shape();
  const std::size_t n = shape[a];
  const std::size_t m = n * factor;
  const std::size_t outer = product(shape, 0, a);
  const std::size_t inner = product(shape, a + 1, shape.size());

  std::vector<cplx> spec = state.data;
  fft_axis(spec, shape, axis, -1);

  GridState out;
  out.axes = state.axes;
  out.axes[a].count = m;
  out.t = state.t;
  out.hbar = state.hbar;
  out.data.assign(outer * m * inner, cplx{0.0, 0.0});
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < inner; ++i) {
        const cplx v = spec[(o * n + j) * inner + i] * scale;
        if (2 * j < n) {
          out.data[(o * m + j) * inner + i] = v;
        } else if (2 * j == n) {
          out.data[(o * m + j) * inner + i] = 0.5 * v;
          out.data[(o * m + (m - n + j)) * inner + i] = 0.5 * v;
        } else {
          out.data[(o * m + (m - n + j)) * inner + i] = v;
        }
      }
    }
  }
  auto out_shape = shape;
  out_shape[a] = m;
  fft_axis(out.data, out_shape, axis, +1);
  return out;
}

void spectral_shift(GridState& state, int axis, double shift) {
  const auto a = static_cast<std::size_t>(axis);
  const auto shape = state.shape();
  const auto k = wavenumbers(state.axes[a]);
  const std::size_t n = shape[a];
  const std::size_t outer = product(shape, 0, a);
  const std::size_t inner = product(shape, a + 1, shape.size());
  fft_axis(state.data, shape, axis, -1);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t j = 0; j < n; ++j) {
      // The Nyquist mode has no unique phase; its real-valued average is kept.
      const cplx f = (2 * j == n) ? cplx{std::cos(k[j] * shift), 0.0} : std::polar(1.0, k[j] * shift);
      for (std::size_t i = 0; i < inner; ++i) state.data[(o * n + j) * inner + i] *= f * scale;
    }
  }
  fft_axis(state.data, shape, axis, +1);
}

GridState apply_momentum(const GridState& state, int axis) {
  const auto a = static_cast<std::size_t>(axis);
  const auto shape = state.shape();
  const auto k = wavenumbers(state.axes[a]);
  const std::size_t n = shape[a];
  const std::size_t outer = product(shape, 0, a);
  const std::size_t inner = product(shape, a + 1, shape.size());
  GridState out = state;
  fft_axis(out.data, shape, axis, -1);
  const double scale = state.hbar / static_cast<double>(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t j = 0; j < n; ++j) {
      const double f = (2 * j == n) ? 0.0 : k[j] * scale;
      for (std::size_t i = 0; i < inner; ++i) out.data[(o * n + j) * inner + i] *= f;
    }
  }
  fft_axis(out.data, shape, axis, +1);
  return out;
}

}  // namespace gpx
