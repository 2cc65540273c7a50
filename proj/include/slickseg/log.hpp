#pragma once

#include <string>

namespace slickseg {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Level parsed once from SLICKSEG_LOG={error,info,debug}; defaults to info.
LogLevel log_level();

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

/// Emits msg at info level the first time key is seen in this process.
void warn_once(const std::string& key, const std::string& msg);

}  // namespace slickseg
