#include "gpx/scenario.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gpx/evolution.hpp"
#include "gpx/kernel.hpp"
#include "gpx/moments.hpp"
#include "gpx/reference.hpp"
#include "gpx/symmetry.hpp"

namespace gpx {

using nlohmann::json;

namespace {

const std::set<std::string> kTaskTypes = {"evolve",       "inverse-roundtrip", "ladder",
                                          "quasi-energy", "oracle-compare",    "kernel-crosscheck"};

std::string time_tag(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

Vec json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

cplx json_cplx(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw ConfigError("complex coefficients are [re, im]");
  return {v[0], v[1]};
}

double task_tol(const json& task, const char* key, double fallback, const ScenarioOverrides& ov) {
  if (ov.tol) return *ov.tol;
  return task.value(key, fallback);
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double wrap_phase(double a) { return std::remainder(a, 2.0 * kPi); }

struct Context {
  QuadraticModel model;
  std::vector<Axis> axes;
  GridState initial;
  std::vector<double> schedule;
  std::filesystem::path out;
  ScenarioOverrides overrides;
  EvolveOptions evolve_opts;
};

void task_evolve(const Context& c, const json& task, Report& report) {
  const double moment_tol = task_tol(task, "moment_tol", 1e-6, c.overrides);
  const double norm_tol = task_tol(task, "norm_tol", 1e-8, c.overrides);
  const Constants k0 = constants_of_motion(c.model, c.initial, c.evolve_opts.moments);
  const double t_end = c.schedule.empty() ? c.initial.t : c.schedule.back();
  const MomentTrajectory hes = integrate_hes(c.model, k0.kappa_tilde, k0.g, c.initial.t, t_end, c.evolve_opts.ode);
  std::vector<double> times;
  std::vector<MomentPoint> measured, predicted;
  double worst_moment = 0.0, worst_norm = 0.0;
  for (double t : c.schedule) {
    const GridState psi = evolve(c.model, c.initial, t, c.evolve_opts);
    const Constants k = constants_of_motion(c.model, psi, c.evolve_opts.moments);
    const MomentPoint g = hes.at(t);
    worst_moment = std::max({worst_moment, (k.g.z - g.z).cwiseAbs().maxCoeff(),
                             (k.g.Delta - g.Delta).cwiseAbs().maxCoeff()});
    worst_norm = std::max(worst_norm, std::abs(k.norm_sq - k0.norm_sq) / k0.norm_sq);
    times.push_back(t);
    measured.push_back(k.g);
    predicted.push_back(g);
    write_density_csv(c.out / ("density_t" + time_tag(t) + ".csv"), psi);
  }
  write_trajectory_csv(c.out / "moments.csv", times, measured);
  write_trajectory_csv(c.out / "hes.csv", times, predicted);
  report.add("evolve.moment_tracking", worst_moment, moment_tol);
  report.add("evolve.norm_conservation", worst_norm, norm_tol);
}

void task_inverse(const Context& c, const json& task, Report& report) {
  const double tol = task_tol(task, "tol", 1e-8, c.overrides);
  const double t = task.value("t", c.schedule.empty() ? c.initial.t + 1.0 : c.schedule.back());
  const GridState forward = evolve(c.model, c.initial, t, c.evolve_opts);
  EvolveOptions back = c.evolve_opts;
  back.output_axes = c.initial.axes;
  const GridState again = evolve_inverse(c.model, forward, c.initial.t, back);
  report.add("inverse.roundtrip_l2", l2_distance(again, c.initial), tol);
}

void task_ladder(const Context& c, const json& task, Report& report) {
  if (!c.model.ex1d) throw ModelError("ladder task needs the 1D example");
  const int n_max = task.value("n_max", 5);
  const double t = task.value("t", 0.5);
  const double s = task.value("s", 0.0);
  const double tol = task_tol(task, "tol", 1e-7, c.overrides);
  const double coef_tol = task_tol(task, "coef_tol", 1e-6, c.overrides);
  const double ortho_tol = task_tol(task, "ortho_tol", 1e-8, c.overrides);
  const double kt = c.model.kappa;
  const Vec centre = steady_orbit(*c.model.ex1d, kt, t);
  const auto axes = recentered(c.axes, centre.tail(1));
  EvolveOptions opts = c.evolve_opts;
  opts.kappa_tilde = kt;

  std::vector<GridState> closed;
  for (int n = 0; n <= n_max; ++n) closed.push_back(fock_state(c.model, n, t, axes, kt));

  std::ofstream csv(c.out / "ladder.csv");
  csv << "n,chain_l2_error,raise_coef_rel_error,lower_coef_rel_error\n";
  double worst_chain = 0.0, worst_coef = 0.0;
  GridState chain = closed[0];
  for (int n = 0; n < n_max; ++n) {
    const auto nu = static_cast<std::size_t>(n);
    const GridState up = ladder_apply(c.model, +1, closed[nu], s, opts);
    const GridState down = ladder_apply(c.model, -1, closed[nu + 1], s, opts);
    const double root = std::sqrt(n + 1.0);
    const double raise = std::abs(inner_product(closed[nu + 1], up) - root) / root;
    const double lower = std::abs(inner_product(closed[nu], down) - root) / root;
    GridState next = ladder_apply(c.model, +1, chain, s, opts);
    chain = scaled(next, 1.0 / root);
    const double chain_err = l2_distance(chain, closed[nu + 1]);
    worst_chain = std::max(worst_chain, chain_err);
    worst_coef = std::max({worst_coef, raise, lower});
    csv << n + 1 << ',' << format_double(chain_err) << ',' << format_double(raise) << ',' << format_double(lower)
        << '\n';
  }
  const GridState annihilated = ladder_apply(c.model, -1, closed[0], s, opts);
  double worst_ortho = 0.0;
  for (std::size_t m = 0; m < closed.size(); ++m) {
    for (std::size_t n = m; n < closed.size(); ++n) {
      const cplx ip = inner_product(closed[m], closed[n]);
      worst_ortho = std::max(worst_ortho, std::abs(ip - (m == n ? 1.0 : 0.0)));
    }
  }
  report.add("ladder.chain_l2", worst_chain, tol);
  report.add("ladder.coefficient_rel_error", worst_coef, coef_tol);
  report.add("ladder.lowering_ground_norm", l2_norm(annihilated), tol);
  report.add("ladder.orthonormality", worst_ortho, ortho_tol);
}

void task_quasi_energy(const Context& c, const json& task, Report& report) {
  if (!c.model.ex1d) throw ModelError("quasi-energy task needs the 1D example");
  const Example1DParams& p = *c.model.ex1d;
  const double tol = task_tol(task, "tol", 1e-5, c.overrides);
  const auto levels = task.value("levels", std::vector<int>{0, 1, 2});
  const double kt = c.model.kappa;
  const double T = 2.0 * kPi / p.omega;
  const auto axes = recentered(c.axes, steady_orbit(p, kt, 0.0).tail(1));
  EvolveOptions opts = c.evolve_opts;
  opts.kappa_tilde = kt;
  opts.output_axes = axes;
  std::ofstream csv(c.out / "quasi_energy.csv");
  csv << "n,closed_form,measured,phase_error\n";
  double worst = 0.0;
  for (int n : levels) {
    const GridState psi0 = fock_state(c.model, n, 0.0, axes, kt);
    const GridState psiT = evolve(c.model, psi0, T, opts);
    const double phase = std::arg(inner_product(psi0, psiT));
    const double e = quasi_energy(c.model, n, kt);
    const double err = std::abs(wrap_phase(phase + e * T / c.model.hbar));
    const double measured = e + wrap_phase(-phase - e * T / c.model.hbar) * c.model.hbar / T;
    worst = std::max(worst, err);
    csv << n << ',' << format_double(e) << ',' << format_double(measured) << ',' << format_double(err) << '\n';
  }
  report.add("quasi_energy.phase_error", worst, tol);
}

void task_oracle(const Context& c, const json& task, Report& report) {
  const double tol = task_tol(task, "tol", 1e-6, c.overrides);
  const double slope_min = task.value("slope_min", 1.9);
  const double t = task.value("t", c.schedule.empty() ? c.initial.t + 1.0 : c.schedule.back());
  const auto dts = task.value("dts", std::vector<double>{8e-4, 4e-4, 2e-4, 1e-4});
  EvolveOptions opts = c.evolve_opts;
  opts.output_axes = c.initial.axes;
  const GridState exact = evolve(c.model, c.initial, t, opts);
  std::ofstream csv(c.out / "oracle_error.csv");
  csv << "dt,l2_error\n";
  std::vector<double> errors;
  for (double dt : dts) {
    OracleConfig cfg;
    cfg.dt = dt;
    const double e = l2_distance(split_step_evolve(c.model, c.initial, t, cfg), exact);
    errors.push_back(e);
    csv << format_double(dt) << ',' << format_double(e) << '\n';
  }
  report.add("oracle.l2_at_finest_dt", errors.back(), tol);
  if (dts.size() >= 2) report.add("oracle.convergence_slope", fitted_slope(dts, errors), slope_min, ">=");
}

void task_kernel(const Context& c, const json& task, Report& report) {
  const double tol = task_tol(task, "tol", 1e-9, c.overrides);
  const int samples = task.value("samples", 100);
  std::mt19937_64 rng(task.value("seed", 20240601ULL));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Constants k0 = constants_of_motion(c.model, c.initial, c.evolve_opts.moments);
  const double kt = k0.kappa_tilde;
  const double s = c.initial.t;
  const int n = c.model.n;
  double limit;
  if (c.model.ex1d) {
    limit = kPi / std::sqrt(c.model.ex1d->Omega_sq(kt));
  } else if (c.model.ex3d) {
    limit = kPi / std::sqrt(std::max(c.model.ex3d->omega1_sq(kt), c.model.ex3d->omega2_sq(kt)));
  } else {
    throw ModelError("kernel cross-check needs one of the worked examples");
  }
  std::ofstream csv(c.out / "kernel_check.csv");
  csv << "tau,rel_error\n";
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double tau = limit * (0.05 + 0.9 * unit(rng));
    const KernelContext ctx = make_kernel_context(c.model, kt, k0.g, s, s + tau, c.evolve_opts.ode);
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
      x[static_cast<std::size_t>(d)] = ctx.Xt(d) + 6.0 * (unit(rng) - 0.5);
      y[static_cast<std::size_t>(d)] = ctx.Xs(d) + 6.0 * (unit(rng) - 0.5);
    }
    const Vec zs = (Vec(2 * n) << ctx.Ps, ctx.Xs).finished();
    const Vec zt = (Vec(2 * n) << ctx.Pt, ctx.Xt).finished();
    const cplx g = green_function(ctx, x, y);
    const cplx ref = c.model.ex1d
                         ? closed_form_kernel_1d(*c.model.ex1d, kt, c.model.hbar, zs, zt, ctx.dS, x[0], y[0], s + tau, s)
                         : closed_form_kernel_3d(*c.model.ex3d, kt, c.model.hbar, zs, zt, ctx.dS, x, y, s + tau, s);
    const double err = std::abs(g - ref) / std::abs(ref);
    worst = std::max(worst, err);
    csv << format_double(tau) << ',' << format_double(err) << '\n';
  }
  report.add("kernel.closed_form_rel_error", worst, tol);
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file: " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::vector<std::string> validate_scenario(const json& config) {
  std::vector<std::string> errors;
  if (!config.is_object()) return {"config must be a JSON object"};
  if (!config.contains("model") || !config["model"].is_object()) errors.emplace_back("missing object 'model'");
  if (!config.contains("grid") || !config["grid"].is_object()) errors.emplace_back("missing object 'grid'");
  if (!config.contains("initial") || !config["initial"].is_object()) {
    errors.emplace_back("missing object 'initial'");
  } else if (!config["initial"].contains("type")) {
    errors.emplace_back("'initial' needs a 'type'");
  }
  if (config.contains("schedule")) {
    if (!config["schedule"].is_array()) {
      errors.emplace_back("'schedule' must be an array of times");
    } else {
      double prev = -std::numeric_limits<double>::infinity();
      for (const auto& t : config["schedule"]) {
        if (!t.is_number()) {
          errors.emplace_back("'schedule' entries must be numbers");
          break;
        }
        if (t.get<double>() <= prev) {
          errors.emplace_back("'schedule' times must be strictly increasing");
          break;
        }
        prev = t.get<double>();
      }
    }
  }
  if (config.contains("tasks")) {
    if (!config["tasks"].is_array()) {
      errors.emplace_back("'tasks' must be an array");
    } else {
      for (const auto& task : config["tasks"]) {
        const std::string type = task.is_object() ? task.value("type", "") : "";
        if (!kTaskTypes.count(type)) errors.emplace_back("unknown task type '" + type + "'");
      }
    }
  }
  return errors;
}

std::vector<Axis> parse_grid(const json& grid) {
  std::vector<Axis> axes;
  if (grid.contains("axes")) {
    for (const auto& a : grid.at("axes")) {
      axes.push_back(Axis{a.at("min").get<double>(), a.at("max").get<double>(), a.at("count").get<std::size_t>()});
    }
  } else {
    const auto lo = grid.at("min").get<std::vector<double>>();
    const auto hi = grid.at("max").get<std::vector<double>>();
    const auto count = grid.at("count").get<std::vector<std::size_t>>();
    if (lo.size() != hi.size() || lo.size() != count.size()) throw ConfigError("grid arrays differ in length");
    for (std::size_t d = 0; d < lo.size(); ++d) axes.push_back(Axis{lo[d], hi[d], count[d]});
  }
  for (const auto& a : axes) {
    if (!(a.max > a.min) || a.count < 2) throw ConfigError("grid axes need max > min and at least 2 points");
  }
  return axes;
}

GridState build_initial_state(const QuadraticModel& model, const json& spec, const std::vector<Axis>& axes, double t0,
                              const std::filesystem::path& base_dir) {
  const std::string type = spec.at("type").get<std::string>();
  if (type == "gaussian") {
    const int n = model.n;
    const Vec x0 = spec.contains("x0") ? json_vec(spec["x0"]) : Vec::Zero(n);
    const Vec p0 = spec.contains("p0") ? json_vec(spec["p0"]) : Vec::Zero(n);
    const Vec sigma = spec.contains("sigma") ? json_vec(spec["sigma"]) : Vec::Ones(n);
    return gaussian_state(axes, x0, p0, sigma, model.hbar, t0, spec.value("chirp", 0.0));
  }
  if (type == "fock") {
    std::optional<double> kt;
    if (spec.contains("kappa_tilde")) kt = spec["kappa_tilde"].get<double>();
    return fock_state(model, spec.at("n").get<int>(), t0, axes, kt);
  }
  if (type == "superposition") {
    const auto& states = spec.at("states");
    const auto& coeffs = spec.at("coeffs");
    if (states.size() != coeffs.size() || states.empty()) throw ConfigError("superposition needs matching states and coeffs");
    GridState acc = zero_state(axes, t0, model.hbar);
    for (std::size_t i = 0; i < states.size(); ++i) {
      acc = linear_combination(1.0, acc, json_cplx(coeffs[i]), build_initial_state(model, states[i], axes, t0, base_dir));
    }
    return acc;
  }
  if (type == "file") {
    std::filesystem::path p = spec.at("path").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw ConfigError("initial state file not found: " + p.string());
    return p.extension() == ".csv" ? read_state_csv(p) : read_state_binary(p);
  }
  throw ConfigError("unknown initial state type: " + type);
}

Report run_scenario(const json& config, const std::filesystem::path& base_dir, const ScenarioOverrides& overrides) {
  const auto errors = validate_scenario(config);
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << "scenario schema violations:";
    for (const auto& e : errors) msg << "\n  - " << e;
    throw ConfigError(msg.str());
  }
  Context c;
  c.overrides = overrides;
  c.model = build_model(config.at("model"));
  c.axes = parse_grid(config.at("grid"));
  if (static_cast<int>(c.axes.size()) != c.model.n) throw ConfigError("grid dimension does not match the model");
  if (overrides.grid) {
    for (auto& a : c.axes) a.count = *overrides.grid;
  }
  const double t0 = config.value("t0", 0.0);
  c.initial = build_initial_state(c.model, config.at("initial"), c.axes, t0, base_dir);
  c.schedule = config.value("schedule", std::vector<double>{});
  std::filesystem::path out = overrides.out.value_or(config.value("output", std::string{"out"}));
  if (out.is_relative() && !overrides.out) out = base_dir / out;
  std::filesystem::create_directories(out);
  c.out = out;
  if (config.contains("ode")) {
    c.evolve_opts.ode.rtol = config["ode"].value("rtol", c.evolve_opts.ode.rtol);
    c.evolve_opts.ode.atol = config["ode"].value("atol", c.evolve_opts.ode.atol);
  }

  Report report;
  for (const auto& task : config.value("tasks", json::array())) {
    const std::string type = task.at("type").get<std::string>();
    if (overrides.only_tasks &&
        std::find(overrides.only_tasks->begin(), overrides.only_tasks->end(), type) == overrides.only_tasks->end()) {
      continue;
    }
    spdlog::info("task {}", type);
    try {
      if (type == "evolve") task_evolve(c, task, report);
      if (type == "inverse-roundtrip") task_inverse(c, task, report);
      if (type == "ladder") task_ladder(c, task, report);
      if (type == "quasi-energy") task_quasi_energy(c, task, report);
      if (type == "oracle-compare") task_oracle(c, task, report);
      if (type == "kernel-crosscheck") task_kernel(c, task, report);
    } catch (const std::exception& e) {
      spdlog::error("task {} failed: {}", type, e.what());
      report.fail(type + ".error", e.what());
    }
  }
  write_report(out / "report.json", report);
  return report;
}

Report run_scenario_file(const std::filesystem::path& path, const ScenarioOverrides& overrides) {
  const json config = read_json_file(path);
  return run_scenario(config, path.parent_path(), overrides);
}

}  // namespace gpx
