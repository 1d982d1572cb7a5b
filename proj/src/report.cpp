#include "gpx/report.hpp"

#include <cmath>
#include <fstream>

#include "gpx/types.hpp"

namespace gpx {

const Check& Report::add(const std::string& name, double value, double tolerance, const std::string& relation,
                         const std::string& detail) {
  Check c;
  c.name = name;
  c.value = value;
  c.tolerance = tolerance;
  c.relation = relation;
  c.detail = detail;
  if (relation == "<=") {
    c.pass = std::isfinite(value) && value <= tolerance;
  } else if (relation == ">=") {
    c.pass = std::isfinite(value) && value >= tolerance;
  } else {
    throw ConfigError("unknown check relation: " + relation);
  }
  checks_.push_back(std::move(c));
  return checks_.back();
}

const Check& Report::fail(const std::string& name, const std::string& detail) {
  Check c;
  c.name = name;
  c.value = std::nan("");
  c.tolerance = std::nan("");
  c.pass = false;
  c.detail = detail;
  checks_.push_back(std::move(c));
  return checks_.back();
}

void Report::merge(const Report& other) { checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end()); }

bool Report::pass() const {
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::json emit_report(const Report& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks()) {
    nlohmann::json j = {{"name", c.name}, {"relation", c.relation}, {"pass", c.pass}};
    // JSON has no NaN; unmeasured values are null.
    j["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
    j["tolerance"] = std::isfinite(c.tolerance) ? nlohmann::json(c.tolerance) : nlohmann::json(nullptr);
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  return {{"pass", report.pass()}, {"checks", std::move(checks)}};
}

void write_report(const std::filesystem::path& path, const Report& report) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  os << emit_report(report).dump(2) << '\n';
}

}  // namespace gpx
