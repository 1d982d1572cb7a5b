#include "gpx/model.hpp"

#include <cmath>
#include <string>

namespace gpx {

namespace {

constexpr double kSymmetryTol = 1e-12;

using nlohmann::json;

double get_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

Mat read_matrix(const json& j, int rows, int cols, const std::string& name) {
  std::vector<double> flat;
  if (j.is_array() && !j.empty() && j.front().is_array()) {
    for (const auto& row : j) {
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
  } else {
    flat = j.get<std::vector<double>>();
  }
  if (static_cast<int>(flat.size()) != rows * cols) {
    throw ModelError(name + ": expected " + std::to_string(rows * cols) + " entries, got " +
                     std::to_string(flat.size()));
  }
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

Vec read_vector(const json& j, int size, const std::string& name) {
  const auto v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != size) {
    throw ModelError(name + ": expected " + std::to_string(size) + " entries, got " +
                     std::to_string(v.size()));
  }
  return Eigen::Map<const Vec>(v.data(), size);
}

Mat checked_symmetric(const Mat& m, const std::string& name) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw ModelError(name + " is not symmetric");
  }
  return symmetrized(m);
}

void validate(const QuadraticModel& model) {
  const int d = model.phase_dim();
  if (model.n < 1 || model.n > 3) throw ModelError("dimension must be 1..3");
  if (!(model.hbar > 0.0)) throw ModelError("hbar must be positive");
  if (!(model.mass > 0.0)) throw ModelError("mass must be positive");
  for (const Mat* w : {&model.Wzz, &model.Wzw, &model.Www}) {
    if (w->rows() != d || w->cols() != d) throw ModelError("W matrices must be 2n x 2n");
  }
  // Time-dependent samplers are checked at a few fixed instants.
  for (double t : {0.0, 0.37, 1.3, 2.9}) {
    const Mat h = model.Hzz(t);
    const Vec hz = model.Hz(t);
    if (h.rows() != d || h.cols() != d) throw ModelError("Hzz must be 2n x 2n");
    if (hz.size() != d) throw ModelError("Hz must have 2n entries");
    checked_symmetric(h, "Hzz");
    const Mat hpp = h.topLeftCorner(model.n, model.n);
    if (std::abs(hpp.determinant()) < 1e-300 ||
        hpp.fullPivLu().rank() < model.n) {
      throw ModelError("momentum block of Hzz is singular");
    }
  }
}

QuadraticModel build_custom(const json& spec) {
  QuadraticModel model;
  model.n = spec.at("n").get<int>();
  if (model.n < 1 || model.n > 3) throw ModelError("dimension must be 1..3");
  const int d = 2 * model.n;
  model.hbar = get_or(spec, "hbar", 1.0);
  model.mass = get_or(spec, "mass", 1.0);
  model.kappa = get_or(spec, "kappa", 0.0);
  const Mat hzz = checked_symmetric(read_matrix(spec.at("Hzz"), d, d, "Hzz"), "Hzz");
  const Vec hz0 = spec.contains("Hz") ? read_vector(spec.at("Hz"), d, "Hz") : Vec::Zero(d);
  const Vec hz_cos = spec.contains("Hz_cos") ? read_vector(spec.at("Hz_cos"), d, "Hz_cos") : Vec::Zero(d);
  const Vec hz_sin = spec.contains("Hz_sin") ? read_vector(spec.at("Hz_sin"), d, "Hz_sin") : Vec::Zero(d);
  const double w = get_or(spec, "omega", 0.0);
  model.Hzz = [hzz](double) { return hzz; };
  model.Hz = [hz0, hz_cos, hz_sin, w](double t) -> Vec {
    return hz0 + std::cos(w * t) * hz_cos + std::sin(w * t) * hz_sin;
  };
  auto w_or_zero = [&](const char* key) -> Mat {
    return spec.contains(key) ? read_matrix(spec.at(key), d, d, key) : Mat::Zero(d, d);
  };
  model.Wzz = checked_symmetric(w_or_zero("Wzz"), "Wzz");
  model.Wzw = w_or_zero("Wzw");
  model.Www = checked_symmetric(w_or_zero("Www"), "Www");
  model.spec = spec;
  return model;
}

}  // namespace

double Example1DParams::steady_amplitude(double kappa_tilde) const {
  const double gap = OmegaTilde_sq(kappa_tilde) - omega * omega;
  if (std::abs(gap) < 1e-14) throw ModelError("resonant drive: OmegaTilde^2 == omega^2");
  return e * E / (m * gap);
}

QuadraticModel make_example_1d(const Example1DParams& p, double kappa, double hbar) {
  QuadraticModel model;
  model.n = 1;
  model.hbar = hbar;
  model.mass = p.m;
  model.kappa = kappa;
  Mat hzz(2, 2);
  hzz << 1.0 / p.m, 0.0, 0.0, p.k;
  model.Hzz = [hzz](double) { return hzz; };
  model.Hz = [p](double t) -> Vec {
    Vec v(2);
    v << 0.0, -p.e * p.E * std::cos(p.omega * t);
    return v;
  };
  model.Wzz = Mat::Zero(2, 2);
  model.Wzw = Mat::Zero(2, 2);
  model.Www = Mat::Zero(2, 2);
  model.Wzz(1, 1) = p.a;
  model.Wzw(1, 1) = p.b;
  model.Www(1, 1) = p.c;
  model.ex1d = p;
  model.spec = {{"example", "1d"}, {"n", 1},      {"hbar", hbar},  {"kappa", kappa},
                {"m", p.m},        {"k", p.k},    {"e", p.e},      {"E", p.E},
                {"omega", p.omega}, {"a", p.a},   {"b", p.b},      {"c", p.c}};
  validate(model);
  return model;
}

QuadraticModel make_example_3d(const Example3DParams& p, double kappa, double hbar) {
  QuadraticModel model;
  model.n = 3;
  model.hbar = hbar;
  model.mass = p.m;
  model.kappa = kappa;
  const double wh = p.omega_H();
  Mat hzz = Mat::Zero(6, 6);
  hzz.topLeftCorner(3, 3) = Mat::Identity(3, 3) / p.m;
  // (p - eA/c)^2/2m with A = H x x / 2: cross terms (wH/2)(p1 x2 - p2 x1), diamagnetic m(wH/2)^2/2.
  hzz(0, 4) = hzz(4, 0) = 0.5 * wh;
  hzz(1, 3) = hzz(3, 1) = -0.5 * wh;
  const double transverse = p.m * (p.omega0_sq() + 0.25 * wh * wh);
  hzz(3, 3) = transverse;
  hzz(4, 4) = transverse;
  hzz(5, 5) = p.m * p.omega0_sq();
  model.Hzz = [hzz](double) { return hzz; };
  model.Hz = [p](double t) -> Vec {
    Vec v = Vec::Zero(6);
    v(3) = -p.e * p.E_field * std::cos(p.omega * t);
    v(4) = -p.e * p.E_field * std::sin(p.omega * t);
    return v;
  };
  const double eta = p.eta();
  model.Wzz = Mat::Zero(6, 6);
  model.Wzw = Mat::Zero(6, 6);
  model.Www = Mat::Zero(6, 6);
  model.Wzz.bottomRightCorner(3, 3) = -eta * Mat::Identity(3, 3);
  model.Www.bottomRightCorner(3, 3) = -eta * Mat::Identity(3, 3);
  model.Wzw.bottomRightCorner(3, 3) = eta * Mat::Identity(3, 3);
  model.ex3d = p;
  model.spec = {{"example", "3d"},   {"n", 3},           {"hbar", hbar},
                {"kappa", kappa},    {"m", p.m},         {"e", p.e},
                {"c_light", p.c_light}, {"H", p.H_field}, {"E", p.E_field},
                {"omega", p.omega},  {"k", p.k},         {"V0", p.V0},
                {"gamma", p.gamma}};
  validate(model);
  return model;
}

QuadraticModel build_model(const json& spec) {
  const std::string kind = spec.value("example", std::string{"custom"});
  const double hbar = get_or(spec, "hbar", 1.0);
  const double kappa = get_or(spec, "kappa", 0.0);
  if (kind == "1d") {
    if (spec.contains("n") && spec.at("n").get<int>() != 1) throw ModelError("1d example requires n = 1");
    Example1DParams p;
    p.m = get_or(spec, "m", 1.0);
    p.k = get_or(spec, "k", 1.0);
    p.e = get_or(spec, "e", 1.0);
    p.E = get_or(spec, "E", 0.0);
    p.omega = get_or(spec, "omega", 0.0);
    p.a = get_or(spec, "a", 0.0);
    p.b = get_or(spec, "b", 0.0);
    p.c = get_or(spec, "c", 0.0);
    if (!(p.m > 0.0)) throw ModelError("mass must be positive");
    return make_example_1d(p, kappa, hbar);
  }
  if (kind == "3d") {
    if (spec.contains("n") && spec.at("n").get<int>() != 3) throw ModelError("3d example requires n = 3");
    Example3DParams p;
    p.m = get_or(spec, "m", 1.0);
    p.e = get_or(spec, "e", 1.0);
    p.c_light = get_or(spec, "c_light", 1.0);
    p.H_field = get_or(spec, "H", 0.0);
    p.E_field = get_or(spec, "E", 0.0);
    p.omega = get_or(spec, "omega", 0.0);
    p.k = get_or(spec, "k", 1.0);
    p.V0 = get_or(spec, "V0", 0.0);
    p.gamma = get_or(spec, "gamma", 1.0);
    if (!(p.m > 0.0)) throw ModelError("mass must be positive");
    if (p.gamma == 0.0) throw ModelError("gamma must be nonzero");
    return make_example_3d(p, kappa, hbar);
  }
  if (kind != "custom") throw ModelError("unknown example kind: " + kind);
  QuadraticModel model = build_custom(spec);
  validate(model);
  return model;
}

nlohmann::json model_to_json(const QuadraticModel& model) { return model.spec; }

Mat effective_hessian(const QuadraticModel& model, double kappa_tilde, double t) {
  return symmetrized(model.Hzz(t) + kappa_tilde * model.Wzz);
}

}  // namespace gpx
