#include "gpx/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <mutex>
#include <string>

namespace gpx {

void init_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv("GPX_LOG")) {
      const std::string v{env};
      if (v == "error") level = spdlog::level::err;
      else if (v == "info") level = spdlog::level::info;
      else if (v == "debug") level = spdlog::level::debug;
    }
    spdlog::set_default_logger(spdlog::stderr_color_mt("gpx"));
    spdlog::set_level(level);
    spdlog::set_pattern("[gpx %l] %v");
  });
}

}  // namespace gpx
