#pragma once

#include <filesystem>

#include "gpx/model.hpp"
#include "gpx/ode.hpp"

namespace gpx {

/// Phase-space means z = (<p>, <x>) and the symmetric centred second moments
/// Delta = [[s_pp, s_px], [s_xp, s_xx]].
struct MomentPoint {
  Vec z;
  Mat Delta;

  Vec P(int n) const { return z.head(n); }
  Vec X(int n) const { return z.tail(n); }
};

/// Dense solution of the moment equations on [s, t] (either direction).
class MomentTrajectory {
 public:
  MomentTrajectory() = default;
  MomentTrajectory(int n, double kappa_tilde, MomentPoint initial, OdeSolution solution);

  int n() const { return n_; }
  double kappa_tilde() const { return kappa_tilde_; }
  double s() const { return sol_.t0(); }
  double t() const { return sol_.t1(); }
  const MomentPoint& initial() const { return initial_; }
  MomentPoint at(double t) const;
  /// d/dt of the point, from the right-hand side.
  MomentPoint rate(double t) const;
  const std::vector<double>& mesh() const { return sol_.times(); }

 private:
  int n_ = 1;
  double kappa_tilde_ = 0.0;
  MomentPoint initial_;
  OdeSolution sol_;
};

/// Dense fundamental matrix A(tau, s) of dA/dt = J h_zz(t) A, A(s, s) = I.
class MatriciantTrajectory {
 public:
  MatriciantTrajectory() = default;
  MatriciantTrajectory(int n, OdeSolution solution);

  double s() const { return sol_.t0(); }
  double t() const { return sol_.t1(); }
  Mat at(double tau) const;
  Mat final() const { return at(t()); }
  const std::vector<double>& mesh() const { return sol_.times(); }

 private:
  int n_ = 1;
  OdeSolution sol_;
};

struct MatriciantBlocks {
  Mat lambda1, lambda2, lambda3, lambda4;
};

MomentTrajectory integrate_hes(const QuadraticModel& model, double kappa_tilde, const MomentPoint& g0, double s,
                               double t, const OdeTolerance& tol = {});

MatriciantTrajectory integrate_variations_dense(const QuadraticModel& model, double kappa_tilde, double s, double t,
                                                const OdeTolerance& tol = {});

/// A(t, s).
Mat integrate_variations(const QuadraticModel& model, double kappa_tilde, double s, double t,
                         const OdeTolerance& tol = {});

/// A = [[l4^T, -l2^T], [-l3^T, l1^T]].
MatriciantBlocks matriciant_blocks(const Mat& A);
Mat assemble_matriciant(const MatriciantBlocks& b);

/// max |A^T J A - J|.
double symplectic_defect(const Mat& A);

/// Right-hand side of the moment equations at time t.
MomentPoint hes_rhs(const QuadraticModel& model, double kappa_tilde, double t, const MomentPoint& g);

/// CSV with columns t, z0..z{2n-1}, then the upper triangle D_ij (i <= j).
void write_trajectory_csv(const std::filesystem::path& path, const std::vector<double>& times,
                          const std::vector<MomentPoint>& points);

}  // namespace gpx
