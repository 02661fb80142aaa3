#include "fxcast/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace fxcast {

LogLevel log_level() {
	static const LogLevel level = [] {
		const char *env = std::getenv("FORECAST_LOG");
		if (env == nullptr) {
			return LogLevel::warn;
		}
		const std::string value(env);
		if (value == "quiet" || value == "0") return LogLevel::quiet;
		if (value == "warn" || value == "1") return LogLevel::warn;
		if (value == "info" || value == "2") return LogLevel::info;
		if (value == "debug" || value == "3") return LogLevel::debug;
		return LogLevel::warn;
	}();
	return level;
}

namespace {

void emit(LogLevel threshold, std::string_view tag, std::string_view message) {
	if (log_level() >= threshold) {
		std::cerr << "forecast: " << tag << ": " << message << '\n';
	}
}

} // namespace

void log_warn(std::string_view message) { emit(LogLevel::warn, "warning", message); }
void log_info(std::string_view message) { emit(LogLevel::info, "info", message); }
void log_debug(std::string_view message) { emit(LogLevel::debug, "debug", message); }

} // namespace fxcast
