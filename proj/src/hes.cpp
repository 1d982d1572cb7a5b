#include "gpx/hes.hpp"

#include <fstream>

#include "gpx/grid.hpp"

namespace gpx {

namespace {

Vec pack(const MomentPoint& g) {
  const auto d = g.z.size();
  Vec y(d + d * d);
  y.head(d) = g.z;
  y.tail(d * d) = Eigen::Map<const Vec>(g.Delta.data(), d * d);
  return y;
}

MomentPoint unpack(const Vec& y, int d) {
  MomentPoint g;
  g.z = y.head(d);
  g.Delta = Eigen::Map<const Mat>(y.data() + d, d, d);
  return g;
}

void symmetrize_tail(Vec& y, int d) {
  Eigen::Map<Mat> m(y.data() + d, d, d);
  const Mat s = symmetrized(m);
  m = s;
}

}  // namespace

MomentPoint hes_rhs(const QuadraticModel& model, double kappa_tilde, double t, const MomentPoint& g) {
  const Mat J = symplectic_unit(model.n);
  const Mat hzz = model.Hzz(t);
  const Mat h_eff = symmetrized(hzz + kappa_tilde * model.Wzz);
  // The centre feels the mean-field pull of its own image through Wzw.
  const Mat h_centre = hzz + kappa_tilde * (model.Wzz + model.Wzw);
  MomentPoint r;
  r.z = J * (model.Hz(t) + h_centre * g.z);
  const Mat JH = J * h_eff;
  r.Delta = JH * g.Delta + g.Delta * JH.transpose();
  return r;
}

MomentTrajectory::MomentTrajectory(int n, double kappa_tilde, MomentPoint initial, OdeSolution solution)
    : n_(n), kappa_tilde_(kappa_tilde), initial_(std::move(initial)), sol_(std::move(solution)) {}

MomentPoint MomentTrajectory::at(double t) const { return unpack(sol_.at(t), 2 * n_); }

MomentPoint MomentTrajectory::rate(double t) const { return unpack(sol_.derivative(t), 2 * n_); }

MatriciantTrajectory::MatriciantTrajectory(int n, OdeSolution solution) : n_(n), sol_(std::move(solution)) {}

Mat MatriciantTrajectory::at(double tau) const {
  const int d = 2 * n_;
  const Vec y = sol_.at(tau);
  return Eigen::Map<const Mat>(y.data(), d, d);
}

MomentTrajectory integrate_hes(const QuadraticModel& model, double kappa_tilde, const MomentPoint& g0, double s,
                               double t, const OdeTolerance& tol) {
  const int d = model.phase_dim();
  if (g0.z.size() != d || g0.Delta.rows() != d || g0.Delta.cols() != d) {
    throw ModelError("initial moment point has the wrong dimension");
  }
  auto rhs = [model, kappa_tilde, d](double tau, const Vec& y, Vec& dy) {
    const MomentPoint r = hes_rhs(model, kappa_tilde, tau, unpack(y, d));
    dy = pack(r);
  };
  MomentPoint start{g0.z, symmetrized(g0.Delta)};
  auto proj = [d](Vec& y) { symmetrize_tail(y, d); };
  OdeSolution sol = integrate_ode(rhs, s, t, pack(start), tol, proj);
  return MomentTrajectory(model.n, kappa_tilde, start, std::move(sol));
}

MatriciantTrajectory integrate_variations_dense(const QuadraticModel& model, double kappa_tilde, double s, double t,
                                                const OdeTolerance& tol) {
  const int d = model.phase_dim();
  const Mat J = symplectic_unit(model.n);
  auto rhs = [model, kappa_tilde, d, J](double tau, const Vec& y, Vec& dy) {
    const Eigen::Map<const Mat> A(y.data(), d, d);
    const Mat dA = J * effective_hessian(model, kappa_tilde, tau) * A;
    dy = Eigen::Map<const Vec>(dA.data(), d * d);
  };
  const Mat I = Mat::Identity(d, d);
  const Vec y0 = Eigen::Map<const Vec>(I.data(), d * d);
  return MatriciantTrajectory(model.n, integrate_ode(rhs, s, t, y0, tol));
}

Mat integrate_variations(const QuadraticModel& model, double kappa_tilde, double s, double t,
                         const OdeTolerance& tol) {
  if (s == t) return Mat::Identity(model.phase_dim(), model.phase_dim());
  return integrate_variations_dense(model, kappa_tilde, s, t, tol).final();
}

MatriciantBlocks matriciant_blocks(const Mat& A) {
  const auto n = A.rows() / 2;
  MatriciantBlocks b;
  b.lambda4 = A.topLeftCorner(n, n).transpose();
  b.lambda2 = -A.topRightCorner(n, n).transpose();
  b.lambda3 = -A.bottomLeftCorner(n, n).transpose();
  b.lambda1 = A.bottomRightCorner(n, n).transpose();
  return b;
}

Mat assemble_matriciant(const MatriciantBlocks& b) {
  const auto n = b.lambda1.rows();
  Mat A(2 * n, 2 * n);
  A.topLeftCorner(n, n) = b.lambda4.transpose();
  A.topRightCorner(n, n) = -b.lambda2.transpose();
  A.bottomLeftCorner(n, n) = -b.lambda3.transpose();
  A.bottomRightCorner(n, n) = b.lambda1.transpose();
  return A;
}

double symplectic_defect(const Mat& A) {
  const Mat J = symplectic_unit(static_cast<int>(A.rows() / 2));
  return (A.transpose() * J * A - J).cwiseAbs().maxCoeff();
}

void write_trajectory_csv(const std::filesystem::path& path, const std::vector<double>& times,
                          const std::vector<MomentPoint>& points) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  if (points.empty()) {
    os << "t\n";
    return;
  }
  const auto d = points.front().z.size();
  os << 't';
  for (Eigen::Index i = 0; i < d; ++i) os << ",z" << i;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) os << ",D" << i << j;
  }
  os << '\n';
  for (std::size_t k = 0; k < points.size(); ++k) {
    os << format_double(times[k]);
    for (Eigen::Index i = 0; i < d; ++i) os << ',' << format_double(points[k].z(i));
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j) os << ',' << format_double(points[k].Delta(i, j));
    }
    os << '\n';
  }
}

}  // namespace gpx
