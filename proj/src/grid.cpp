#include "gpx/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace gpx {

std::vector<std::size_t> GridState::shape() const {
  std::vector<std::size_t> s;
  s.reserve(axes.size());
  for (const auto& a : axes) s.push_back(a.count);
  return s;
}

double GridState::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes) v *= a.step();
  return v;
}

void GridState::coordinates(std::size_t i, std::span<double> x) const {
  for (int d = dim() - 1; d >= 0; --d) {
    const auto& a = axes[static_cast<std::size_t>(d)];
    x[static_cast<std::size_t>(d)] = a.point(i % a.count);
    i /= a.count;
  }
}

std::size_t grid_size(const std::vector<Axis>& axes) {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.count;
  return n;
}

GridState sample_state(const std::vector<Axis>& axes, double t, double hbar,
                       const std::function<cplx(std::span<const double>)>& f) {
  GridState s{axes, std::vector<cplx>(grid_size(axes)), t, hbar};
  std::vector<double> x(axes.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s.coordinates(i, x);
    s.data[i] = f(x);
  }
  return s;
}

GridState zero_state(const std::vector<Axis>& axes, double t, double hbar) {
  return GridState{axes, std::vector<cplx>(grid_size(axes), cplx{0.0, 0.0}), t, hbar};
}

GridState gaussian_state(const std::vector<Axis>& axes, const Vec& x0, const Vec& p0, const Vec& sigma,
                         double hbar, double t, double chirp) {
  const auto n = static_cast<Eigen::Index>(axes.size());
  if (x0.size() != n || p0.size() != n || sigma.size() != n) {
    throw GridMismatchError("gaussian_state: parameter vectors must match the grid dimension");
  }
  return sample_state(axes, t, hbar, [&](std::span<const double> x) {
    double log_amp = 0.0;
    double phase = 0.0;
    for (Eigen::Index d = 0; d < n; ++d) {
      const double dx = x[static_cast<std::size_t>(d)] - x0(d);
      const double s2 = sigma(d) * sigma(d);
      log_amp += -dx * dx / (4.0 * s2) - 0.25 * std::log(2.0 * kPi * s2);
      phase += (p0(d) * dx + 0.5 * chirp * dx * dx) / hbar;
    }
    return std::exp(log_amp) * std::polar(1.0, phase);
  });
}

std::vector<Axis> recentered(const std::vector<Axis>& axes, const Vec& center) {
  std::vector<Axis> out = axes;
  for (std::size_t d = 0; d < axes.size(); ++d) {
    const double half = 0.5 * axes[d].length();
    out[d].min = center(static_cast<Eigen::Index>(d)) - half;
    out[d].max = center(static_cast<Eigen::Index>(d)) + half;
  }
  return out;
}

void require_same_grid(const GridState& a, const GridState& b) {
  if (a.axes != b.axes) throw GridMismatchError("states live on different grids");
}

double l2_distance(const GridState& a, const GridState& b) {
  require_same_grid(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a.data[i] - b.data[i]);
  return std::sqrt(sum * a.cell_volume());
}

double l2_norm(const GridState& a) {
  double sum = 0.0;
  for (const auto& v : a.data) sum += std::norm(v);
  return std::sqrt(sum * a.cell_volume());
}

cplx inner_product(const GridState& a, const GridState& b) {
  require_same_grid(a, b);
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a.data[i]) * b.data[i];
  return sum * a.cell_volume();
}

GridState scaled(const GridState& s, cplx c) {
  GridState out = s;
  for (auto& v : out.data) v *= c;
  return out;
}

GridState linear_combination(cplx c1, const GridState& a, cplx c2, const GridState& b) {
  require_same_grid(a, b);
  GridState out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out.data[i] = c1 * a.data[i] + c2 * b.data[i];
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

constexpr char kMagic[8] = {'G', 'P', 'X', 'S', 'T', 'A', 'T', 'E'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("truncated state file");
  return v;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw ConfigError("malformed number in state file: " + s);
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

void write_state_binary(const std::filesystem::path& path, const GridState& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  os.write(kMagic, sizeof kMagic);
  put(os, kVersion);
  put(os, static_cast<std::uint32_t>(state.axes.size()));
  for (const auto& a : state.axes) {
    put(os, a.min);
    put(os, a.max);
    put(os, static_cast<std::uint64_t>(a.count));
  }
  put(os, state.t);
  put(os, state.hbar);
  put(os, static_cast<std::uint64_t>(state.data.size()));
  os.write(reinterpret_cast<const char*>(state.data.data()),
           static_cast<std::streamsize>(state.data.size() * sizeof(cplx)));
}

GridState read_state_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open state file: " + path.string());
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ConfigError("not a gpx state file");
  if (get<std::uint32_t>(is) != kVersion) throw ConfigError("unsupported state file version");
  const auto n = get<std::uint32_t>(is);
  GridState s;
  for (std::uint32_t d = 0; d < n; ++d) {
    Axis a;
    a.min = get<double>(is);
    a.max = get<double>(is);
    a.count = static_cast<std::size_t>(get<std::uint64_t>(is));
    s.axes.push_back(a);
  }
  s.t = get<double>(is);
  s.hbar = get<double>(is);
  const auto size = static_cast<std::size_t>(get<std::uint64_t>(is));
  if (size != grid_size(s.axes)) throw ConfigError("state file size does not match its grid");
  s.data.resize(size);
  is.read(reinterpret_cast<char*>(s.data.data()), static_cast<std::streamsize>(size * sizeof(cplx)));
  if (!is) throw ConfigError("truncated state file");
  return s;
}

void write_state_csv(const std::filesystem::path& path, const GridState& state) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  os << "# gpx-state\n";
  os << "# t," << format_double(state.t) << ",hbar," << format_double(state.hbar) << '\n';
  for (const auto& a : state.axes) {
    os << "# axis," << format_double(a.min) << ',' << format_double(a.max) << ',' << a.count << '\n';
  }
  for (int d = 0; d < state.dim(); ++d) os << 'x' << d << ',';
  os << "re,im\n";
  std::vector<double> x(state.axes.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    state.coordinates(i, x);
    for (double xi : x) os << format_double(xi) << ',';
    os << format_double(state.data[i].real()) << ',' << format_double(state.data[i].imag()) << '\n';
  }
}

GridState read_state_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open state file: " + path.string());
  GridState s;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto parts = split(line.substr(2), ',');
      if (parts.size() == 4 && parts[0] == "t") {
        s.t = parse_double(parts[1]);
        s.hbar = parse_double(parts[3]);
      } else if (parts.size() == 4 && parts[0] == "axis") {
        s.axes.push_back(Axis{parse_double(parts[1]), parse_double(parts[2]),
                              static_cast<std::size_t>(std::stoull(parts[3]))});
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      s.data.reserve(grid_size(s.axes));
      continue;
    }
    const auto parts = split(line, ',');
    if (parts.size() != s.axes.size() + 2) throw ConfigError("malformed state row: " + line);
    s.data.emplace_back(parse_double(parts[parts.size() - 2]), parse_double(parts.back()));
  }
  if (s.axes.empty() || s.data.size() != grid_size(s.axes)) {
    throw ConfigError("state file does not match its grid: " + path.string());
  }
  return s;
}

void write_density_csv(const std::filesystem::path& path, const GridState& state) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  for (int d = 0; d < state.dim(); ++d) os << 'x' << d << ',';
  os << "density\n";
  std::vector<double> x(state.axes.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    state.coordinates(i, x);
    for (double xi : x) os << format_double(xi) << ',';
    os << format_double(std::norm(state.data[i])) << '\n';
  }
}

}  // namespace gpx
