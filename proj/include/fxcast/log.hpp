#pragma once

#include <string_view>

namespace fxcast {

/// Diagnostic verbosity, resolved once from the FORECAST_LOG environment
/// variable: quiet | warn (default) | info | debug.
enum class LogLevel { quiet = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();

/// Diagnostics go to stderr; the report stream stays clean.
void log_warn(std::string_view message);
void log_info(std::string_view message);
void log_debug(std::string_view message);

} // namespace fxcast
