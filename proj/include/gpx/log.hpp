#pragma once

namespace gpx {

/// Reads GPX_LOG (error | info | debug) and configures the default logger once.
void init_logging();

}  // namespace gpx
