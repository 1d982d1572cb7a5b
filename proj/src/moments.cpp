#include "gpx/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gpx/fft.hpp"

namespace gpx {

namespace {

constexpr double kBoundarySlab = 0.05;
constexpr double kSpectralBand = 0.10;

// Strides of a row-major array.
std::vector<std::size_t> strides(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (int d = static_cast<int>(shape.size()) - 2; d >= 0; --d) {
    s[static_cast<std::size_t>(d)] = s[static_cast<std::size_t>(d) + 1] * shape[static_cast<std::size_t>(d) + 1];
  }
  return s;
}

double raw_mass(const std::vector<cplx>& data) {
  double m = 0.0;
  for (const auto& v : data) m += std::norm(v);
  return m;
}

std::vector<double> coordinate_table(const Axis& a) {
  std::vector<double> x(a.count);
  for (std::size_t j = 0; j < a.count; ++j) x[j] = a.point(j);
  return x;
}

}  // namespace

TailReport tail_fractions(const GridState& state) {
  TailReport r;
  const auto shape = state.shape();
  const auto st = strides(shape);
  const double total = raw_mass(state.data);
  if (!(total > 0.0)) return r;

  for (std::size_t d = 0; d < shape.size(); ++d) {
    const std::size_t n = shape[d];
    const auto slab = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(kBoundarySlab * double(n))));
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      const std::size_t j = (i / st[d]) % n;
      if (j < slab) lo += std::norm(state.data[i]);
      if (j >= n - slab) hi += std::norm(state.data[i]);
    }
    r.boundary = std::max({r.boundary, lo / total, hi / total});
  }

  std::vector<cplx> spec = state.data;
  fft_all(spec, shape, -1);
  const double spec_total = raw_mass(spec);
  for (std::size_t d = 0; d < shape.size(); ++d) {
    const std::size_t n = shape[d];
    if (n < 4) continue;
    const auto k = wavenumbers(state.axes[d]);
    const double kmax = kPi / state.axes[d].step();
    double tail = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const std::size_t j = (i / st[d]) % n;
      if (std::abs(k[j]) >= (1.0 - kSpectralBand) * kmax) tail += std::norm(spec[i]);
    }
    r.spectral = std::max(r.spectral, tail / spec_total);
  }
  return r;
}

void check_resolved(const GridState& state, const MomentOptions& opts) {
  for (const auto& v : state.data) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ResolutionError("state has non-finite amplitudes");
  }
  if (!opts.check) return;
  const TailReport r = tail_fractions(state);
  if (r.boundary > opts.tail_tol) {
    std::ostringstream msg;
    msg << "boundary tail mass fraction " << r.boundary << " exceeds " << opts.tail_tol;
    throw ResolutionError(msg.str());
  }
  if (r.spectral > opts.spectral_tol) {
    std::ostringstream msg;
    msg << "spectral tail fraction " << r.spectral << " exceeds " << opts.spectral_tol;
    throw ResolutionError(msg.str());
  }
}

double norm_squared(const GridState& state, const MomentOptions& opts) {
  check_resolved(state, opts);
  return raw_mass(state.data) * state.cell_volume();
}

Vec first_moments(const GridState& state, const MomentOptions& opts) {
  const double nsq = norm_squared(state, opts);
  if (!(nsq > 0.0)) throw ResolutionError("moments of a zero-norm state are undefined");
  const int n = state.dim();
  const double w = state.cell_volume() / nsq;
  Vec z = Vec::Zero(2 * n);
  const auto shape = state.shape();
  const auto st = strides(shape);
  for (int d = 0; d < n; ++d) {
    const auto du = static_cast<std::size_t>(d);
    const auto x = coordinate_table(state.axes[du]);
    double sx = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) sx += std::norm(state.data[i]) * x[(i / st[du]) % shape[du]];
    z(n + d) = sx * w;
    const GridState pd = apply_momentum(state, d);
    cplx sp{0.0, 0.0};
    for (std::size_t i = 0; i < state.size(); ++i) sp += std::conj(state.data[i]) * pd.data[i];
    z(d) = sp.real() * w;
  }
  return z;
}

Mat second_moments(const GridState& state, const Vec& z, const MomentOptions& opts) {
  const double nsq = norm_squared(state, opts);
  if (!(nsq > 0.0)) throw ResolutionError("moments of a zero-norm state are undefined");
  const int n = state.dim();
  const auto nu = static_cast<std::size_t>(n);
  const double w = state.cell_volume() / nsq;
  const auto shape = state.shape();
  const auto st = strides(shape);

  std::vector<std::vector<double>> dx(nu);
  for (std::size_t d = 0; d < nu; ++d) {
    dx[d] = coordinate_table(state.axes[d]);
    for (auto& v : dx[d]) v -= z(n + static_cast<Eigen::Index>(d));
  }
  auto delta_x = [&](std::size_t d, std::size_t i) { return dx[d][(i / st[d]) % shape[d]]; };

  // dp[j] = (p_j - <p_j>) psi
  std::vector<GridState> dp;
  dp.reserve(nu);
  for (int d = 0; d < n; ++d) {
    GridState g = apply_momentum(state, d);
    for (std::size_t i = 0; i < g.size(); ++i) g.data[i] -= z(d) * state.data[i];
    dp.push_back(std::move(g));
  }

  Mat D = Mat::Zero(2 * n, 2 * n);
  for (std::size_t j = 0; j < nu; ++j) {
    for (std::size_t k = 0; k < nu; ++k) {
      double sxx = 0.0, spp = 0.0, spx = 0.0;
      for (std::size_t i = 0; i < state.size(); ++i) {
        const cplx psi = state.data[i];
        if (k >= j) {
          sxx += std::norm(psi) * delta_x(j, i) * delta_x(k, i);
          spp += (std::conj(dp[j].data[i]) * dp[k].data[i]).real();
        }
        spx += (std::conj(psi) * delta_x(k, i) * dp[j].data[i]).real();
      }
      const auto J = static_cast<Eigen::Index>(j), K = static_cast<Eigen::Index>(k);
      if (k >= j) {
        D(n + J, n + K) = D(n + K, n + J) = sxx * w;
        D(J, K) = D(K, J) = spp * w;
      }
      D(J, n + K) = D(n + K, J) = spx * w;
    }
  }
  return D;
}

Mat second_moments(const GridState& state, const MomentOptions& opts) {
  return second_moments(state, first_moments(state, opts), opts);
}

Constants constants_of_motion(const QuadraticModel& model, const GridState& state, const MomentOptions& opts) {
  if (state.dim() != model.n) throw GridMismatchError("state dimension does not match the model");
  Constants c;
  c.norm_sq = norm_squared(state, opts);
  if (!(c.norm_sq > 0.0)) throw ResolutionError("zero-norm state has no constants of motion");
  MomentOptions inner = opts;
  inner.check = false;
  c.g.z = first_moments(state, inner);
  c.g.Delta = second_moments(state, c.g.z, inner);
  c.kappa_tilde = effective_coupling(model, c.norm_sq);
  return c;
}

}  // namespace gpx
