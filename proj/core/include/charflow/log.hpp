#pragma once

#include <string>

namespace charflow {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

/// Level comes from the CHARFLOW_LOG environment variable
/// ("quiet" | "info" | "debug", default "info") unless set explicitly.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace charflow
