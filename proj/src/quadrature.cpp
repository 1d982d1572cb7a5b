#include "gpx/quadrature.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <spdlog/spdlog.h>

#include "gpx/fft.hpp"

namespace gpx {

namespace {

std::vector<std::size_t> row_major_strides(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (int d = static_cast<int>(shape.size()) - 2; d >= 0; --d) {
    const auto u = static_cast<std::size_t>(d);
    s[u] = s[u + 1] * shape[u + 1];
  }
  return s;
}

// Input samples multiplied by the y-only part of the kernel phase.
std::vector<cplx> chirped(const KernelContext& ctx, const GridState& in) {
  std::vector<cplx> c(in.size());
  std::vector<double> y(static_cast<std::size_t>(ctx.n));
  Vec dy(ctx.n);
  for (std::size_t i = 0; i < in.size(); ++i) {
    in.coordinates(i, y);
    for (int d = 0; d < ctx.n; ++d) dy(d) = y[static_cast<std::size_t>(d)] - ctx.Xs(d);
    const double phase = 0.5 * dy.dot(ctx.Qyy * dy) - ctx.Ps.dot(dy);
    c[i] = in.data[i] * std::polar(1.0, phase / ctx.hbar);
  }
  return c;
}

// Largest |k| per axis among modes above threshold * peak.
std::vector<double> bandwidths(std::vector<cplx> c, const GridState& in, double threshold) {
  const auto shape = in.shape();
  const auto st = row_major_strides(shape);
  fft_all(c, shape, -1);
  double peak = 0.0;
  for (const auto& v : c) peak = std::max(peak, std::abs(v));
  std::vector<std::vector<double>> ks;
  for (const auto& a : in.axes) ks.push_back(wavenumbers(a));
  std::vector<double> w(shape.size(), 0.0);
  if (peak == 0.0) return w;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) <= threshold * peak) continue;
    for (std::size_t d = 0; d < shape.size(); ++d) {
      w[d] = std::max(w[d], std::abs(ks[d][(i / st[d]) % shape[d]]));
    }
  }
  return w;
}

// Largest |(Qxy^T dx)_d| / hbar over the corners of the output box.
std::vector<double> max_output_frequency(const KernelContext& ctx, const std::vector<Axis>& out_axes) {
  const int n = ctx.n;
  std::vector<double> xi(static_cast<std::size_t>(n), 0.0);
  for (int corner = 0; corner < (1 << n); ++corner) {
    Vec dx(n);
    for (int d = 0; d < n; ++d) {
      const Axis& a = out_axes[static_cast<std::size_t>(d)];
      dx(d) = ((corner >> d) & 1 ? a.point(a.count - 1) : a.min) - ctx.Xt(d);
    }
    const Vec f = ctx.Qxy.transpose() * dx / ctx.hbar;
    for (int d = 0; d < n; ++d) xi[static_cast<std::size_t>(d)] = std::max(xi[static_cast<std::size_t>(d)], std::abs(f(d)));
  }
  return xi;
}

std::vector<std::vector<int>> coupled_components(const Mat& q) {
  const auto n = static_cast<int>(q.rows());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
    return a;
  };
  const double scale = q.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && std::abs(q(i, j)) > 1e-14 * scale) parent[static_cast<std::size_t>(find(i))] = find(j);
    }
  }
  std::vector<std::vector<int>> comps;
  for (int root = 0; root < n; ++root) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (find(i) == root) members.push_back(i);
    }
    if (!members.empty()) comps.push_back(members);
  }
  return comps;
}

// Array whose axes are each either still in input coordinates or already in
// output coordinates; offsets[d] holds dy or dx values along axis d.
struct Stage {
  std::vector<std::size_t> shape;
  std::vector<std::vector<double>> offsets;
  std::vector<cplx> data;
};

// Enumerates flat offsets and coordinate tuples for a subset of axes.
void enumerate(const std::vector<int>& axes, const std::vector<std::size_t>& shape,
               const std::vector<std::size_t>& strides, const std::vector<std::vector<double>>* coords,
               std::vector<std::size_t>& flat, std::vector<double>* values) {
  std::size_t count = 1;
  for (int a : axes) count *= shape[static_cast<std::size_t>(a)];
  flat.assign(count, 0);
  if (values) values->assign(count * axes.size(), 0.0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rem = idx;
    std::size_t off = 0;
    for (int k = static_cast<int>(axes.size()) - 1; k >= 0; --k) {
      const auto a = static_cast<std::size_t>(axes[static_cast<std::size_t>(k)]);
      const std::size_t j = rem % shape[a];
      rem /= shape[a];
      off += j * strides[a];
      if (values) (*values)[idx * axes.size() + static_cast<std::size_t>(k)] = (*coords)[a][j];
    }
    flat[idx] = off;
  }
}

void transform_component(const KernelContext& ctx, const std::vector<int>& comp, const std::vector<Axis>& out_axes,
                         Stage& stage, const QuadratureOptions& opts) {
  const std::size_t dim = stage.shape.size();
  const std::size_t c = comp.size();

  std::vector<int> rest;
  for (int d = 0; d < static_cast<int>(dim); ++d) {
    if (std::find(comp.begin(), comp.end(), d) == comp.end()) rest.push_back(d);
  }

  Stage next;
  next.shape = stage.shape;
  next.offsets = stage.offsets;
  for (int a : comp) {
    const auto u = static_cast<std::size_t>(a);
    const Axis& ax = out_axes[u];
    next.shape[u] = ax.count;
    next.offsets[u].resize(ax.count);
    for (std::size_t j = 0; j < ax.count; ++j) next.offsets[u][j] = ax.point(j) - ctx.Xt(a);
  }
  const auto in_strides = row_major_strides(stage.shape);
  const auto out_strides = row_major_strides(next.shape);

  std::vector<std::size_t> fiber_in, fiber_out, comp_in, comp_out;
  std::vector<double> dy, dx;
  enumerate(rest, stage.shape, in_strides, nullptr, fiber_in, nullptr);
  enumerate(rest, next.shape, out_strides, nullptr, fiber_out, nullptr);
  enumerate(comp, stage.shape, in_strides, &stage.offsets, comp_in, &dy);
  enumerate(comp, next.shape, out_strides, &next.offsets, comp_out, &dx);
  const std::size_t F = fiber_in.size(), M = comp_in.size(), Mo = comp_out.size();

  std::vector<cplx> gathered(F * M);
  for (std::size_t f = 0; f < F; ++f) {
    for (std::size_t m = 0; m < M; ++m) gathered[f * M + m] = stage.data[fiber_in[f] + comp_in[m]];
  }

  // xi_o = Q_CC^T dx_o / hbar for every output tuple.
  Mat q(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ctx.Qxy(comp[i], comp[j]);
  }
  std::vector<double> xi(Mo * c);
  for (std::size_t o = 0; o < Mo; ++o) {
    for (std::size_t j = 0; j < c; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < c; ++i) v += q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * dx[o * c + i];
      xi[o * c + j] = v / ctx.hbar;
    }
  }

  next.data.assign(F * Mo, cplx{0.0, 0.0});
  std::vector<cplx> result(F * Mo);
  if (!opts.parallel) {
    for (std::size_t o = 0; o < Mo; ++o) {
      for (std::size_t f = 0; f < F; ++f) {
        cplx acc{0.0, 0.0};
        for (std::size_t m = 0; m < M; ++m) {
          double ph = 0.0;
          for (std::size_t j = 0; j < c; ++j) ph += xi[o * c + j] * dy[m * c + j];
          acc += std::polar(1.0, ph) * gathered[f * M + m];
        }
        result[f * Mo + o] = acc;
      }
    }
  } else {
    // Along the fastest component axis dy grows by a constant step, so the
    // phase is a geometric sequence; it is reseeded to bound rounding drift.
    const std::size_t last_len = stage.shape[static_cast<std::size_t>(comp.back())];
    const double last_step = last_len > 1 ? dy[1 * c + (c - 1)] - dy[c - 1] : 0.0;
    const std::size_t reseed = static_cast<std::size_t>(std::max(1, opts.reseed));
#pragma omp parallel
    {
      std::vector<cplx> phase(M);
#pragma omp for schedule(static)
      for (std::ptrdiff_t oi = 0; oi < static_cast<std::ptrdiff_t>(Mo); ++oi) {
        const auto o = static_cast<std::size_t>(oi);
        const double* x = &xi[o * c];
        const cplx step = std::polar(1.0, x[c - 1] * last_step);
        for (std::size_t m = 0; m < M; ++m) {
          const std::size_t j = m % last_len;
          if (j % reseed == 0) {
            double ph = 0.0;
            for (std::size_t k = 0; k < c; ++k) ph += x[k] * dy[m * c + k];
            phase[m] = std::polar(1.0, ph);
          } else {
            phase[m] = phase[m - 1] * step;
          }
        }
        for (std::size_t f = 0; f < F; ++f) {
          const cplx* g = &gathered[f * M];
          double re = 0.0, im = 0.0;
          for (std::size_t m = 0; m < M; ++m) {
            re += phase[m].real() * g[m].real() - phase[m].imag() * g[m].imag();
            im += phase[m].real() * g[m].imag() + phase[m].imag() * g[m].real();
          }
          result[f * Mo + o] = cplx{re, im};
        }
      }
    }
  }
  for (std::size_t f = 0; f < F; ++f) {
    for (std::size_t o = 0; o < Mo; ++o) next.data[fiber_out[f] + comp_out[o]] = result[f * Mo + o];
  }
  stage = std::move(next);
}

// Sub-box of the input outside which every sample is below threshold * peak.
GridState trim_to_support(const GridState& psi, double threshold) {
  const auto shape = psi.shape();
  const auto st = row_major_strides(shape);
  const std::size_t nu = shape.size();
  double peak = 0.0;
  for (const auto& v : psi.data) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return psi;
  std::vector<std::size_t> lo(shape), hi(nu, 0);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (std::abs(psi.data[i]) <= threshold * peak) continue;
    for (std::size_t d = 0; d < nu; ++d) {
      const std::size_t j = (i / st[d]) % shape[d];
      lo[d] = std::min(lo[d], j);
      hi[d] = std::max(hi[d], j);
    }
  }
  GridState out;
  out.t = psi.t;
  out.hbar = psi.hbar;
  std::vector<std::size_t> sub(nu);
  for (std::size_t d = 0; d < nu; ++d) {
    const Axis& a = psi.axes[d];
    sub[d] = hi[d] - lo[d] + 1;
    out.axes.push_back(Axis{a.point(lo[d]), a.point(lo[d]) + static_cast<double>(sub[d]) * a.step(), sub[d]});
  }
  const auto sub_st = row_major_strides(sub);
  out.data.resize(grid_size(out.axes));
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    std::size_t src = 0;
    for (std::size_t d = 0; d < nu; ++d) src += ((i / sub_st[d]) % sub[d] + lo[d]) * st[d];
    out.data[i] = psi.data[src];
  }
  return out;
}

}  // namespace

GridState apply_kernel(const KernelContext& ctx, const GridState& psi, const std::vector<Axis>& out_axes,
                       const QuadratureOptions& opts, QuadratureStats* stats) {
  const int n = ctx.n;
  const auto nu = static_cast<std::size_t>(n);
  if (psi.dim() != n || out_axes.size() != nu) throw GridMismatchError("kernel and grid dimensions differ");

  // 1. Drop the negligible margin, then refine until the chirped integrand is
  // resolved and output frequencies cannot alias. The band of the chirped
  // input is bounded by the band of psi plus the largest local frequency of
  // the chirp over the support box; measuring it by FFT instead would pick up
  // rounding noise from the large chirp phases.
  GridState in = trim_to_support(psi, opts.support_threshold);
  std::vector<std::size_t> factor(nu, 1);
  const auto xi_max = max_output_frequency(ctx, out_axes);
  std::vector<double> w = bandwidths(in.data, in, opts.band_threshold);
  {
    std::vector<double> chirp(nu, 0.0);
    for (int corner = 0; corner < (1 << n); ++corner) {
      Vec dy(n);
      for (int d = 0; d < n; ++d) {
        const Axis& a = in.axes[static_cast<std::size_t>(d)];
        dy(d) = ((corner >> d) & 1 ? a.point(a.count - 1) : a.min) - ctx.Xs(d);
      }
      const Vec f = (ctx.Qyy * dy - ctx.Ps) / ctx.hbar;
      for (std::size_t d = 0; d < nu; ++d) chirp[d] = std::max(chirp[d], std::abs(f(static_cast<Eigen::Index>(d))));
    }
    for (std::size_t d = 0; d < nu; ++d) w[d] += chirp[d];
  }
  for (;;) {
    int refine_axis = -1;
    for (std::size_t d = 0; d < nu; ++d) {
      const double h = in.axes[d].step();
      spdlog::debug("quadrature axis {}: points {} bandwidth {} output frequency {}", d, in.axes[d].count, w[d],
                    xi_max[d]);
      if (w[d] * h > 0.5 * kPi || (xi_max[d] + 2.0 * w[d]) * h > kPi) {
        refine_axis = static_cast<int>(d);
        break;
      }
    }
    if (refine_axis < 0) break;
    if (2 * in.size() > opts.max_refined_points) {
      std::ostringstream msg;
      msg << "kernel quadrature over [" << ctx.s << ", " << ctx.t << "] needs more than " << opts.max_refined_points
          << " input samples";
      throw ResolutionError(msg.str());
    }
    in = spectral_refine(in, refine_axis, 2);
    factor[static_cast<std::size_t>(refine_axis)] *= 2;
  }
  std::vector<cplx> c = chirped(ctx, in);
  const double vol = in.cell_volume();
  for (auto& v : c) v *= vol;

  // 2. Trim to the support box.
  const auto shape = in.shape();
  const auto st = row_major_strides(shape);
  double peak = 0.0;
  for (const auto& v : c) peak = std::max(peak, std::abs(v));
  std::vector<std::size_t> lo(nu), hi(nu);
  for (std::size_t d = 0; d < nu; ++d) {
    lo[d] = shape[d];
    hi[d] = 0;
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) <= opts.support_threshold * peak) continue;
    for (std::size_t d = 0; d < nu; ++d) {
      const std::size_t j = (i / st[d]) % shape[d];
      lo[d] = std::min(lo[d], j);
      hi[d] = std::max(hi[d], j);
    }
  }
  Stage stage;
  if (peak == 0.0) {
    return zero_state(out_axes, ctx.t, ctx.hbar);
  }
  stage.shape.resize(nu);
  stage.offsets.resize(nu);
  for (std::size_t d = 0; d < nu; ++d) {
    stage.shape[d] = hi[d] - lo[d] + 1;
    for (std::size_t j = lo[d]; j <= hi[d]; ++j) stage.offsets[d].push_back(in.axes[d].point(j) - ctx.Xs(static_cast<Eigen::Index>(d)));
  }
  const auto trimmed_strides = row_major_strides(stage.shape);
  stage.data.resize(grid_size([&] {
    std::vector<Axis> a(nu);
    for (std::size_t d = 0; d < nu; ++d) a[d].count = stage.shape[d];
    return a;
  }()));
  for (std::size_t i = 0; i < stage.data.size(); ++i) {
    std::size_t src = 0;
    for (std::size_t d = 0; d < nu; ++d) src += ((i / trimmed_strides[d]) % stage.shape[d] + lo[d]) * st[d];
    stage.data[i] = c[src];
  }

  // 3. Sum over each group of coupled axes.
  const auto comps = coupled_components(ctx.Qxy);
  double pairs = 0.0;
  {
    std::vector<std::size_t> cur = stage.shape;
    for (const auto& comp : comps) {
      double in_count = 1.0, out_count = 1.0, fibers = 1.0;
      for (std::size_t d = 0; d < nu; ++d) {
        const bool member = std::find(comp.begin(), comp.end(), static_cast<int>(d)) != comp.end();
        if (member) {
          in_count *= static_cast<double>(cur[d]);
          out_count *= static_cast<double>(out_axes[d].count);
        } else {
          fibers *= static_cast<double>(cur[d]);
        }
      }
      pairs += in_count * out_count * fibers;
      for (int d : comp) cur[static_cast<std::size_t>(d)] = out_axes[static_cast<std::size_t>(d)].count;
    }
  }
  if (pairs > opts.max_pairs) {
    std::ostringstream msg;
    msg << "kernel quadrature needs " << pairs << " kernel evaluations, above the limit " << opts.max_pairs;
    throw ResolutionError(msg.str());
  }
  for (const auto& comp : comps) transform_component(ctx, comp, out_axes, stage, opts);

  // 4. Output-only factor.
  GridState out{out_axes, std::move(stage.data), ctx.t, ctx.hbar};
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel if (opts.parallel)
  {
    std::vector<double> x(nu);
    Vec dx(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < total; ++i) {
      out.coordinates(static_cast<std::size_t>(i), x);
      for (int d = 0; d < n; ++d) dx(d) = x[static_cast<std::size_t>(d)] - ctx.Xt(d);
      const double phase = ctx.dS + ctx.Pt.dot(dx) + 0.5 * dx.dot(ctx.Qxx * dx);
      out.data[static_cast<std::size_t>(i)] *= ctx.prefactor * std::polar(1.0, phase / ctx.hbar);
    }
  }

  if (stats) {
    stats->refine_factor = factor;
    stats->support = std::vector<std::size_t>(nu);
    for (std::size_t d = 0; d < nu; ++d) stats->support[d] = hi[d] - lo[d] + 1;
    stats->components = comps;
    stats->pairs = pairs;
  }
  return out;
}

}  // namespace gpx
