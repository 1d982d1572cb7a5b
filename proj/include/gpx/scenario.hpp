#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpx/grid.hpp"
#include "gpx/model.hpp"
#include "gpx/report.hpp"

namespace gpx {

/// Command-line overrides applied on top of a scenario file.
struct ScenarioOverrides {
  std::optional<std::filesystem::path> out;
  std::optional<double> tol;          // replaces every task tolerance
  std::optional<std::size_t> grid;    // points per axis
  std::optional<std::vector<std::string>> only_tasks;
};

/// Schema violations of a scenario record; empty if valid.
std::vector<std::string> validate_scenario(const nlohmann::json& config);

/// Axes from {"min": [...], "max": [...], "count": [...]} or {"axes": [{"min","max","count"}...]}.
std::vector<Axis> parse_grid(const nlohmann::json& grid);

/// Initial state from {"type": "gaussian" | "fock" | "superposition" | "file", ...}.
GridState build_initial_state(const QuadraticModel& model, const nlohmann::json& spec, const std::vector<Axis>& axes,
                              double t0, const std::filesystem::path& base_dir);

/// Runs every task, writes artifacts and report.json into the output
/// directory, and returns the report. Task exceptions become failed checks
/// named after the task.
Report run_scenario(const nlohmann::json& config, const std::filesystem::path& base_dir,
                    const ScenarioOverrides& overrides = {});

/// Reads a JSON file and runs it; throws ConfigError on unreadable files or schema violations.
Report run_scenario_file(const std::filesystem::path& path, const ScenarioOverrides& overrides = {});

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace gpx
