#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gpx {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// "<=" (value must not exceed tolerance) or ">=" (value must reach it).
  std::string relation = "<=";
  bool pass = false;
  std::string detail;
};

class Report {
 public:
  const Check& add(const std::string& name, double value, double tolerance, const std::string& relation = "<=",
                   const std::string& detail = "");
  /// A check that failed without a measurement (e.g. an exception).
  const Check& fail(const std::string& name, const std::string& detail);
  void merge(const Report& other);

  bool pass() const;
  const std::vector<Check>& checks() const { return checks_; }

 private:
  std::vector<Check> checks_;
};

/// {"pass": bool, "checks": [{"name", "value", "tolerance", "relation", "pass", "detail"?}]}.
nlohmann::json emit_report(const Report& report);
void write_report(const std::filesystem::path& path, const Report& report);

}  // namespace gpx
