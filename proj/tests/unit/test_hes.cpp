#include <doctest.h>

#include <Eigen/SVD>

#include "gpx/hes.hpp"
#include "gpx/symmetry.hpp"
#include "helpers.hpp"

using namespace gpx;

namespace {

MomentPoint point(double p, double x, double spp, double spx, double sxx) {
  MomentPoint g;
  g.z = (Vec(2) << p, x).finished();
  g.Delta = (Mat(2, 2) << spp, spx, spx, sxx).finished();
  return g;
}

}  // namespace

TEST_CASE("harmonic centre follows the classical orbit") {
  const QuadraticModel m = testing::harmonic_model();
  const MomentTrajectory tr = integrate_hes(m, 0.0, point(0.0, 1.0, 0.5, 0.0, 0.5), 0.0, 6.0);
  for (double t : {0.5, 2.0, 6.0}) {
    const MomentPoint g = tr.at(t);
    CHECK(g.z(0) == doctest::Approx(-std::sin(t)).epsilon(1e-10));
    CHECK(g.z(1) == doctest::Approx(std::cos(t)).epsilon(1e-10));
    CHECK((g.Delta - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("steady forced orbit of the 1D example is reproduced with constant Delta") {
  const QuadraticModel m = testing::example_model();
  const Example1DParams p = testing::example_params();
  const double kt = 0.5;
  const double W2 = p.Omega_sq(kt);
  const double sxx = 0.3;
  MomentPoint g0;
  g0.z = steady_orbit(p, kt, 0.0);
  g0.Delta = (Mat(2, 2) << p.m * p.m * W2 * sxx, 0.0, 0.0, sxx).finished();
  const MomentTrajectory tr = integrate_hes(m, kt, g0, 0.0, 10.0);
  const double gap = p.OmegaTilde_sq(kt) - p.omega * p.omega;
  for (double t : {1.0, 4.0, 10.0}) {
    const MomentPoint g = tr.at(t);
    CHECK(g.z(0) == doctest::Approx(-p.e * p.E * p.omega * std::sin(p.omega * t) / gap).epsilon(1e-10));
    CHECK(g.z(1) == doctest::Approx(p.e * p.E * std::cos(p.omega * t) / (p.m * gap)).epsilon(1e-10));
    CHECK((g.Delta - g0.Delta).cwiseAbs().maxCoeff() < 1e-11);
  }
  // Stationarity of Delta directly from the right-hand side.
  CHECK(hes_rhs(m, kt, 0.3, g0).Delta.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("free moments spread ballistically") {
  const double mass = 2.0;
  const QuadraticModel m = testing::free_model(mass);
  const double spp = 0.4, spx = 0.1, sxx = 0.9;
  const MomentTrajectory tr = integrate_hes(m, 0.0, point(1.0, 0.0, spp, spx, sxx), 0.0, 3.0);
  const double t = 3.0;
  const MomentPoint g = tr.at(t);
  CHECK(g.z(1) == doctest::Approx(t / mass));
  CHECK(g.Delta(1, 1) == doctest::Approx(sxx + 2.0 * spx * t / mass + spp * t * t / (mass * mass)).epsilon(1e-12));
}

TEST_CASE("harmonic matriciant blocks") {
  const double W = 1.3, mass = 0.8;
  const QuadraticModel m = testing::harmonic_model(W, mass);
  for (double tau : {0.3, 1.1, 2.9}) {
    const MatriciantBlocks b = matriciant_blocks(integrate_variations(m, 0.0, 0.5, 0.5 + tau));
    CHECK(b.lambda1(0, 0) == doctest::Approx(std::cos(W * tau)).epsilon(1e-10));
    CHECK(b.lambda4(0, 0) == doctest::Approx(std::cos(W * tau)).epsilon(1e-10));
    CHECK(b.lambda2(0, 0) == doctest::Approx(mass * W * std::sin(W * tau)).epsilon(1e-10));
    CHECK(b.lambda3(0, 0) == doctest::Approx(-std::sin(W * tau) / (mass * W)).epsilon(1e-10));
  }
}

TEST_CASE("free matriciant blocks and the identity") {
  const QuadraticModel m = testing::free_model(1.5);
  const MatriciantBlocks b = matriciant_blocks(integrate_variations(m, 0.0, 0.0, 2.0));
  CHECK(b.lambda1(0, 0) == doctest::Approx(1.0));
  CHECK(b.lambda4(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(b.lambda2(0, 0)) < 1e-14);
  CHECK(b.lambda3(0, 0) == doctest::Approx(-2.0 / 1.5));

  const MatriciantBlocks id = matriciant_blocks(Mat::Identity(6, 6));
  CHECK(id.lambda1.isIdentity());
  CHECK(id.lambda4.isIdentity());
  CHECK(id.lambda2.isZero());
  CHECK(id.lambda3.isZero());
}

TEST_CASE("blocks reassemble the matriciant") {
  const Mat A = integrate_variations(make_example_3d(testing::example3d_params(), 0.4), 0.4, 0.0, 1.3);
  CHECK(assemble_matriciant(matriciant_blocks(A)) == A);
}

TEST_CASE("matriciants are symplectic with unit determinant") {
  const QuadraticModel m3 = make_example_3d(testing::example3d_params(), 0.4);
  for (double t : {0.7, 2.5, 6.0}) {
    const Mat A = integrate_variations(m3, 0.4, 0.0, t);
    CHECK(symplectic_defect(A) < 1e-10);
    CHECK(A.determinant() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("3D lambda_3 is a rotation times the oscillator amplitudes") {
  const Example3DParams p = testing::example3d_params();
  const double kt = 0.4;
  const QuadraticModel m = make_example_3d(p, kt);
  const double t = 1.4;
  const MatriciantBlocks b = matriciant_blocks(integrate_variations(m, kt, 0.0, t));
  const double w1 = std::sqrt(p.omega1_sq(kt)), w2 = std::sqrt(p.omega2_sq(kt));
  // -m lambda_3 = r u with r = diag(s1, s1, s2) and u a rotation about x3,
  // so (m lambda_3)(m lambda_3)^T = r^2 and det(-m lambda_3) = s1^2 s2.
  const Mat L = -p.m * b.lambda3;
  const double s1 = std::sin(w1 * t) / w1, s2 = std::sin(w2 * t) / w2;
  const Mat r2 = (Vec(3) << s1 * s1, s1 * s1, s2 * s2).finished().asDiagonal();
  CHECK((L * L.transpose() - r2).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(L.determinant() == doctest::Approx(s1 * s1 * s2).epsilon(1e-10));
  // The rotation angle is omega_H t / 2.
  const Mat u = (Vec(3) << 1.0 / s1, 1.0 / s1, 1.0 / s2).finished().asDiagonal() * L;
  CHECK(std::abs(std::atan2(std::abs(u(0, 1)), u(0, 0)) - 0.5 * p.omega_H() * t) < 1e-10);
}

TEST_CASE("moment trajectories integrate backwards") {
  const QuadraticModel m = testing::example_model();
  const MomentPoint g0 = point(0.3, 1.0, 0.7, 0.05, 0.36);
  const MomentTrajectory fwd = integrate_hes(m, 0.5, g0, 0.0, 2.0);
  const MomentTrajectory back = integrate_hes(m, 0.5, fwd.at(2.0), 2.0, 0.0);
  CHECK((back.at(0.0).z - g0.z).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((back.at(0.0).Delta - g0.Delta).cwiseAbs().maxCoeff() < 1e-11);
}
