#include "gpx/reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gpx/fft.hpp"
#include "gpx/moments.hpp"

namespace gpx {

namespace {

void require_oracle_model(const QuadraticModel& model, double t0, double t1) {
  const int n = model.n;
  for (double t : {t0, 0.5 * (t0 + t1), t1}) {
    const Mat h = model.Hzz(t);
    if (h.topRightCorner(n, n).cwiseAbs().maxCoeff() != 0.0) {
      throw ModelError("split-step oracle needs Hzz without p-x coupling");
    }
    if (model.Hz(t).head(n).cwiseAbs().maxCoeff() != 0.0) {
      throw ModelError("split-step oracle needs Hz without momentum terms");
    }
  }
  for (const Mat* w : {&model.Wzz, &model.Wzw, &model.Www}) {
    const double off = std::max({w->topLeftCorner(n, n).cwiseAbs().maxCoeff(),
                                 w->topRightCorner(n, n).cwiseAbs().maxCoeff(),
                                 w->bottomLeftCorner(n, n).cwiseAbs().maxCoeff()});
    if (off != 0.0) throw ModelError("split-step oracle needs interaction matrices with position blocks only");
  }
}

// Position moments <y> and <(y - <y>)(y - <y>)^T> from |psi|^2.
// Position mean and covariance of |psi|^2; xs holds the grid coordinates point-major.
void position_moments(const GridState& psi, const std::vector<double>& xs, Vec& mean, Mat& cov) {
  const int n = psi.dim();
  const auto nu = static_cast<std::size_t>(n);
  double mass = 0.0;
  mean = Vec::Zero(n);
  Mat second = Mat::Zero(n, n);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double w = std::norm(psi.data[i]);
    const double* x = &xs[i * nu];
    mass += w;
    for (int a = 0; a < n; ++a) {
      mean(a) += w * x[a];
      for (int b = 0; b < n; ++b) second(a, b) += w * x[a] * x[b];
    }
  }
  mean /= mass;
  cov = second / mass - mean * mean.transpose();
}

}  // namespace

GridState split_step_evolve(const QuadraticModel& model, const GridState& psi, double t, const OracleConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ConfigError("oracle time step must be positive");
  const double s = psi.t;
  require_oracle_model(model, s, t);
  const int n = model.n;
  const double hbar = model.hbar;
  const auto steps = static_cast<long>(std::ceil(std::abs(t - s) / cfg.dt - 1e-9));
  GridState cur = psi;
  if (steps == 0) return cur;
  const double dt = (t - s) / static_cast<double>(steps);
  const double norm0 = l2_norm(psi);
  const double kt = cfg.kappa_tilde.value_or(model.kappa * norm0 * norm0);

  const auto shape = cur.shape();
  std::vector<std::vector<double>> ks;
  for (const auto& a : cur.axes) ks.push_back(wavenumbers(a));
  std::vector<double> kinetic_k(cur.size());  // <k, Hpp k>
  std::vector<double> xs(cur.size() * static_cast<std::size_t>(n));
  {
    std::vector<std::size_t> st(shape.size(), 1);
    for (int d = n - 2; d >= 0; --d) st[static_cast<std::size_t>(d)] = st[static_cast<std::size_t>(d) + 1] * shape[static_cast<std::size_t>(d) + 1];
    const Mat hpp = model.Hzz(s).topLeftCorner(n, n);
    Vec k(n);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (int d = 0; d < n; ++d) {
        const auto u = static_cast<std::size_t>(d);
        k(d) = ks[u][(i / st[u]) % shape[u]];
      }
      kinetic_k[i] = k.dot(hpp * k);
      cur.coordinates(i, x);
      for (int d = 0; d < n; ++d) xs[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(d)] = x[static_cast<std::size_t>(d)];
    }
  }
  std::vector<cplx> half_kinetic(cur.size());
  const double inv_size = 1.0 / static_cast<double>(cur.size());
  for (std::size_t i = 0; i < cur.size(); ++i) {
    half_kinetic[i] = std::polar(inv_size, -dt * hbar * kinetic_k[i] / 4.0);
  }

  const Mat Wxx = model.Wzz.bottomRightCorner(n, n);
  const Mat Wxy = model.Wzw.bottomRightCorner(n, n);
  const Mat Wyy = model.Www.bottomRightCorner(n, n);
  const FftPlan forward(shape, -1), backward(shape, +1);
  const auto nu = static_cast<std::size_t>(n);
  std::vector<double> V(cur.size());
  for (long step = 0; step < steps; ++step) {
    const double tm = s + (static_cast<double>(step) + 0.5) * dt;
    forward.execute(cur.data);
    for (std::size_t i = 0; i < cur.size(); ++i) cur.data[i] *= half_kinetic[i];
    backward.execute(cur.data);

    Vec mean;
    Mat cov;
    position_moments(cur, xs, mean, cov);
    const Mat h = model.Hzz(tm);
    const Mat Hxx = h.bottomRightCorner(n, n);
    const Vec hx = model.Hz(tm).tail(n);
    const Mat quad = 0.5 * (Hxx + kt * Wxx);
    const Vec lin = hx + kt * (Wxy * mean);
    const double c0 = 0.5 * kt * (mean.dot(Wyy * mean) + (Wyy * cov).trace());
    double vmax = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const double* x = &xs[i * nu];
      double v = c0;
      for (int a = 0; a < n; ++a) {
        double row = lin(a);
        for (int b = 0; b < n; ++b) row += quad(a, b) * x[b];
        v += row * x[a];
      }
      V[i] = v;
      vmax = std::max(vmax, std::abs(v));
    }
    if (dt * vmax / hbar >= 0.5) {
      std::ostringstream msg;
      msg << "oracle phase step dt*max|V|/hbar = " << dt * vmax / hbar << " is not below 0.5";
      throw ConfigError(msg.str());
    }
    for (std::size_t i = 0; i < cur.size(); ++i) cur.data[i] *= std::polar(1.0, -dt * V[i] / hbar);

    forward.execute(cur.data);
    for (std::size_t i = 0; i < cur.size(); ++i) cur.data[i] *= half_kinetic[i];
    backward.execute(cur.data);
  }
  cur.t = t;
  const double norm1 = l2_norm(cur);
  if (std::abs(norm1 * norm1 - norm0 * norm0) > cfg.max_norm_drift * norm0 * norm0) {
    std::ostringstream msg;
    msg << "oracle norm drift " << std::abs(norm1 * norm1 - norm0 * norm0) / (norm0 * norm0);
    throw IntegrationError(msg.str());
  }
  return cur;
}

GridState apply_weyl_quadratic(const GridState& psi, const Mat& Q, const Vec& L, double c0) {
  const int n = psi.dim();
  GridState out = scaled(psi, c0);
  std::vector<GridState> p, xpsi;
  for (int j = 0; j < n; ++j) p.push_back(apply_momentum(psi, j));
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> coord(static_cast<std::size_t>(n), std::vector<double>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) {
    psi.coordinates(i, x);
    for (int d = 0; d < n; ++d) coord[static_cast<std::size_t>(d)][i] = x[static_cast<std::size_t>(d)];
  }
  for (int j = 0; j < n; ++j) {
    GridState g = psi;
    for (std::size_t i = 0; i < psi.size(); ++i) g.data[i] *= coord[static_cast<std::size_t>(j)][i];
    xpsi.push_back(std::move(g));
  }
  auto add = [&](double c, const GridState& g) {
    if (c == 0.0) return;
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += c * g.data[i];
  };
  for (int j = 0; j < n; ++j) {
    add(L(j), p[static_cast<std::size_t>(j)]);
    add(L(n + j), xpsi[static_cast<std::size_t>(j)]);
    for (int k = 0; k < n; ++k) {
      const auto ju = static_cast<std::size_t>(j), ku = static_cast<std::size_t>(k);
      if (Q(j, k) != 0.0) add(0.5 * Q(j, k), apply_momentum(p[ku], j));
      if (Q(n + j, n + k) != 0.0) {
        GridState g = xpsi[ku];
        for (std::size_t i = 0; i < g.size(); ++i) g.data[i] *= coord[ju][i];
        add(0.5 * Q(n + j, n + k), g);
      }
      // The two off-diagonal blocks together give Q_px,jk (p_j x_k + x_k p_j) / 2.
      const double cpx = Q(j, n + k);
      if (cpx != 0.0) {
        add(0.5 * cpx, apply_momentum(xpsi[ku], j));
        GridState g = p[ju];
        for (std::size_t i = 0; i < g.size(); ++i) g.data[i] *= coord[ku][i];
        add(0.5 * cpx, g);
      }
    }
  }
  return out;
}

double gpe_residual(const QuadraticModel& model, const std::array<GridState, 3>& snapshots, double dt,
                    std::optional<double> kappa_tilde) {
  require_same_grid(snapshots[0], snapshots[1]);
  require_same_grid(snapshots[1], snapshots[2]);
  const GridState& mid = snapshots[1];
  MomentOptions unchecked;
  unchecked.check = false;
  const double nsq = norm_squared(mid, unchecked);
  const double kt = kappa_tilde.value_or(model.kappa * nsq);
  const Vec z = first_moments(mid, unchecked);
  const Mat D = second_moments(mid, z, unchecked);
  const double t = mid.t;
  const Mat Q = model.Hzz(t) + kt * model.Wzz;
  const Vec L = model.Hz(t) + kt * model.Wzw * z;
  const double c0 = 0.5 * kt * (z.dot(model.Www * z) + (model.Www * D).trace());
  GridState r = apply_weyl_quadratic(mid, symmetrized(Q), L, c0);
  const cplx coef = -kI * model.hbar / (2.0 * dt);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.data[i] += coef * (snapshots[2].data[i] - snapshots[0].data[i]);
  }
  return l2_norm(r);
}

}  // namespace gpx
