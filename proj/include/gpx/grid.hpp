#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "gpx/types.hpp"

namespace gpx {

/// Uniform periodic axis: points min + j*step for j in [0, count), step = (max - min) / count.
struct Axis {
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 1;

  double length() const { return max - min; }
  double step() const { return (max - min) / static_cast<double>(count); }
  double point(std::size_t j) const { return min + static_cast<double>(j) * step(); }
  double center() const { return 0.5 * (min + max); }

  bool operator==(const Axis&) const = default;
};

/// Complex amplitudes on a Cartesian product of axes, row-major (axis 0 slowest).
struct GridState {
  std::vector<Axis> axes;
  std::vector<cplx> data;
  double t = 0.0;
  double hbar = 1.0;

  int dim() const { return static_cast<int>(axes.size()); }
  std::size_t size() const { return data.size(); }
  std::vector<std::size_t> shape() const;
  double cell_volume() const;
  /// Coordinates of the flat index i.
  void coordinates(std::size_t i, std::span<double> x) const;
};

std::size_t grid_size(const std::vector<Axis>& axes);

GridState sample_state(const std::vector<Axis>& axes, double t, double hbar,
                       const std::function<cplx(std::span<const double>)>& f);

GridState zero_state(const std::vector<Axis>& axes, double t, double hbar);

/// Product Gaussian packet with per-axis centre x0, mean momentum p0 and
/// position spread sigma (|psi|^2 has variance sigma^2); optional chirp adds
/// exp(i chirp (x - x0)^2 / (2 hbar)). Normalized to 1 in the continuum.
GridState gaussian_state(const std::vector<Axis>& axes, const Vec& x0, const Vec& p0, const Vec& sigma,
                         double hbar, double t = 0.0, double chirp = 0.0);

/// Same counts and widths, centred at `center`.
std::vector<Axis> recentered(const std::vector<Axis>& axes, const Vec& center);

/// Trapezoidal L2 distance; grids must match.
double l2_distance(const GridState& a, const GridState& b);
double l2_norm(const GridState& a);
cplx inner_product(const GridState& a, const GridState& b);

GridState scaled(const GridState& s, cplx c);
/// c1 a + c2 b on a common grid.
GridState linear_combination(cplx c1, const GridState& a, cplx c2, const GridState& b);

void require_same_grid(const GridState& a, const GridState& b);

// State I/O. Binary files round-trip bit-exactly.
void write_state_binary(const std::filesystem::path& path, const GridState& state);
GridState read_state_binary(const std::filesystem::path& path);
void write_state_csv(const std::filesystem::path& path, const GridState& state);
GridState read_state_csv(const std::filesystem::path& path);
/// Columns x0..x{n-1}, density.
void write_density_csv(const std::filesystem::path& path, const GridState& state);

/// 17 significant digits, scientific.
std::string format_double(double v);

}  // namespace gpx
