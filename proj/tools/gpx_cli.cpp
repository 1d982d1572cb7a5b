// gpx: scenario runner for the exact nonlocal GPE propagator.
//
//   gpx scenario --config run.json [--out DIR] [--tol X] [--grid N] [--threads K]
//   gpx evolve   --config run.json ...      (only the evolve task)
//   gpx fock     --config run.json --level N --time T
//   gpx spectrum --config run.json --levels N
//   gpx verify   --config configs/          (every *.json in a directory, or one file)
//
// Exit status is 0 iff every check passes.

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gpx/log.hpp"
#include "gpx/scenario.hpp"
#include "gpx/symmetry.hpp"

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::string out;
  double tol = 0.0;
  std::size_t grid = 0;
  int threads = 0;
};

gpx::ScenarioOverrides overrides_from(const Globals& g) {
  gpx::ScenarioOverrides o;
  if (!g.out.empty()) o.out = g.out;
  if (g.tol > 0.0) o.tol = g.tol;
  if (g.grid > 0) o.grid = g.grid;
  return o;
}

void print_report(const gpx::Report& report, std::ostream& os) {
  for (const auto& c : report.checks()) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << c.value << ' ' << c.relation << ' ' << c.tolerance;
    if (!c.detail.empty()) os << "  (" << c.detail << ')';
    os << '\n';
  }
  os << (report.pass() ? "all checks passed\n" : "some checks failed\n");
}

struct Loaded {
  gpx::QuadraticModel model;
  std::vector<gpx::Axis> axes;
  fs::path out;
};

Loaded load_model_and_grid(const Globals& g) {
  const fs::path path = g.config;
  const auto config = gpx::read_json_file(path);
  Loaded l;
  l.model = gpx::build_model(config.at("model"));
  l.axes = gpx::parse_grid(config.at("grid"));
  if (g.grid > 0) {
    for (auto& a : l.axes) a.count = g.grid;
  }
  l.out = g.out.empty() ? path.parent_path() / config.value("output", std::string{"out"}) : fs::path(g.out);
  fs::create_directories(l.out);
  return l;
}

int run_verify(const Globals& g) {
  std::vector<fs::path> files;
  if (fs::is_directory(g.config)) {
    for (const auto& e : fs::directory_iterator(g.config)) {
      if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.emplace_back(g.config);
  }
  if (files.empty()) throw gpx::ConfigError("no configs found under " + g.config);
  bool all = true;
  for (const auto& f : files) {
    gpx::ScenarioOverrides o = overrides_from(g);
    if (!g.out.empty()) o.out = fs::path(g.out) / f.stem();
    const gpx::Report r = gpx::run_scenario_file(f, o);
    std::cout << "== " << f.string() << '\n';
    print_report(r, std::cout);
    all = all && r.pass();
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  gpx::init_logging();
  CLI::App app{"Exact evolution for the nonlocal Gross-Pitaevskii equation with quadratic potentials"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "scenario JSON file (or a directory for verify)")->required();
  app.add_option("--out", g.out, "output directory");
  app.add_option("--tol", g.tol, "replace every task tolerance");
  app.add_option("--grid", g.grid, "points per axis");
  app.add_option("--threads", g.threads, "OpenMP threads for the kernel quadrature");
  app.fallthrough();

  auto* scenario = app.add_subcommand("scenario", "run all tasks of a scenario");
  auto* evolve = app.add_subcommand("evolve", "run only the evolve task of a scenario");
  auto* fock = app.add_subcommand("fock", "write a closed-form Fock solution of the 1D example");
  int level = 0;
  double time = 0.0;
  fock->add_option("--level", level, "quantum number n")->check(CLI::NonNegativeNumber);
  fock->add_option("--time", time, "time label");
  auto* spectrum = app.add_subcommand("spectrum", "tabulate quasi-energies of the 1D example");
  int levels = 6;
  spectrum->add_option("--levels", levels, "number of levels")->check(CLI::PositiveNumber);
  auto* verify = app.add_subcommand("verify", "run shipped golden configs");

  CLI11_PARSE(app, argc, argv);
  if (g.threads > 0) omp_set_num_threads(g.threads);

  try {
    if (scenario->parsed()) {
      const gpx::Report r = gpx::run_scenario_file(g.config, overrides_from(g));
      print_report(r, std::cout);
      return r.pass() ? 0 : 1;
    }
    if (evolve->parsed()) {
      gpx::ScenarioOverrides o = overrides_from(g);
      o.only_tasks = std::vector<std::string>{"evolve"};
      const gpx::Report r = gpx::run_scenario_file(g.config, o);
      print_report(r, std::cout);
      return r.pass() ? 0 : 1;
    }
    if (fock->parsed()) {
      const Loaded l = load_model_and_grid(g);
      if (!l.model.ex1d) throw gpx::ModelError("fock needs the 1D example");
      const gpx::Vec centre = gpx::steady_orbit(*l.model.ex1d, l.model.kappa, time);
      const auto axes = gpx::recentered(l.axes, centre.tail(1));
      const gpx::GridState psi = gpx::fock_state(l.model, level, time, axes);
      const fs::path file = l.out / ("fock_n" + std::to_string(level) + ".csv");
      gpx::write_state_csv(file, psi);
      std::cout << file.string() << '\n';
      return 0;
    }
    if (spectrum->parsed()) {
      const Loaded l = load_model_and_grid(g);
      const fs::path file = l.out / "spectrum.csv";
      std::ofstream os(file);
      os << "n,quasi_energy\n";
      for (int n = 0; n < levels; ++n) {
        const double e = gpx::quasi_energy(l.model, n, l.model.kappa);
        os << n << ',' << gpx::format_double(e) << '\n';
        std::cout << n << ' ' << gpx::format_double(e) << '\n';
      }
      return 0;
    }
    if (verify->parsed()) return run_verify(g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
