#pragma once

#include <cstdio>
#include <string>

namespace f2p {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel& log_threshold();
bool log_level_from_string(const std::string& name, LogLevel& out);

// All diagnostics go to stderr; stdout is reserved for the one-line summaries.
void log_message(LogLevel level, const std::string& msg);

inline void log_error(const std::string& msg) { log_message(LogLevel::Error, msg); }
inline void log_warn(const std::string& msg) { log_message(LogLevel::Warn, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log_message(LogLevel::Debug, msg); }

}  // namespace f2p
