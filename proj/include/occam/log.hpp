#pragma once

#include <string>

namespace occam {

/// Verbosity is read once from OCCAM_LOG: error (default), info, debug.
enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level();

void log_error(const std::string& message);
void log_info(const std::string& message);
void log_debug(const std::string& message);

}  // namespace occam
