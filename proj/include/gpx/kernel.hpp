#pragma once

#include <filesystem>
#include <span>

#include "gpx/hes.hpp"
#include "gpx/model.hpp"

namespace gpx {

struct KernelOptions {
  /// A split is singular when |det l3| <= caustic_tol * |t-s|^n * |det h_pp(s)|.
  double caustic_tol = 1e-8;
  /// Samples of det A_xp used to follow the prefactor branch from t=s.
  int branch_samples = 256;
};

/// Everything needed to evaluate G(x, y, t, s) for one caustic-free interval.
/// The phase is (i/hbar)[dS + <P_t,dx> - <P_s,dy> + <dy,Qyy dy>/2 + <dx,Qxy dy> + <dx,Qxx dx>/2]
/// with dx = x - X(t), dy = y - X(s).
struct KernelContext {
  int n = 1;
  double hbar = 1.0;
  double s = 0.0;
  double t = 0.0;
  double kappa_tilde = 0.0;
  Vec Ps, Xs, Pt, Xt;
  Mat A;
  MatriciantBlocks blocks;
  double dS = 0.0;
  cplx prefactor{0.0, 0.0};
  Mat Qyy, Qxy, Qxx;
  /// Minimum of det A_xp / (tau^n det h_pp(s)) over the branch samples.
  double min_det_ratio = 1.0;
};

/// Classical Hamiltonian of the associated linear problem along the moments:
/// <z,[Hzz + kt(Wzz + Wzw + Wzw^T + Www)]z>/2 + <Hz,z> + kt tr(Www Delta)/2.
double mean_field_energy(const QuadraticModel& model, double kappa_tilde, double t, const MomentPoint& g);

/// S(t) - S(s) = integral of <P, dX/dt> - energy along the trajectory, by
/// Gauss-Kronrod quadrature on each mesh interval.
double action_integral(const QuadraticModel& model, const MomentTrajectory& trajectory, double s, double t);

/// Builds the context from a moment trajectory covering [s, t] and the
/// matriciant A(., s) integrated from s. Throws CausticError if det l3
/// vanishes or changes sign on (s, t].
KernelContext make_kernel_context(const QuadraticModel& model, const MomentTrajectory& trajectory,
                                  const MatriciantTrajectory& variations, double s, double t,
                                  const KernelOptions& opts = {});

/// Convenience overload: integrates moments and variations from g_s at time s.
KernelContext make_kernel_context(const QuadraticModel& model, double kappa_tilde, const MomentPoint& g_s, double s,
                                  double t, const OdeTolerance& tol = {}, const KernelOptions& opts = {});

double kernel_phase(const KernelContext& ctx, std::span<const double> x, std::span<const double> y);
cplx green_function(const KernelContext& ctx, std::span<const double> x, std::span<const double> y);

/// Harmonic kernel of the 1D example with frequency Omega, tau = t - s in (0, pi/Omega)
/// or any caustic-free value (the Maslov phase is applied). zs, zt are (P, X).
cplx closed_form_kernel_1d(const Example1DParams& p, double kappa_tilde, double hbar, const Vec& zs, const Vec& zt,
                           double dS, double x, double y, double t, double s);

/// Kernel of the 3D example: a rotating transverse oscillator of frequency
/// omega_1 times a longitudinal one of frequency omega_2.
cplx closed_form_kernel_3d(const Example3DParams& p, double kappa_tilde, double hbar, const Vec& zs, const Vec& zt,
                           double dS, std::span<const double> x, std::span<const double> y, double t, double s);

/// Debug dump: rows x..., y..., re, im for all pairs of the given points.
void write_kernel_csv(const std::filesystem::path& path, const KernelContext& ctx,
                      const std::vector<std::vector<double>>& xs, const std::vector<std::vector<double>>& ys);

}  // namespace gpx
