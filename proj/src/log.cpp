#include "f2p/log.hpp"

namespace f2p {

LogLevel& log_threshold() {
    static LogLevel level = LogLevel::Warn;
    return level;
}

bool log_level_from_string(const std::string& name, LogLevel& out) {
    if (name == "error") out = LogLevel::Error;
    else if (name == "warn") out = LogLevel::Warn;
    else if (name == "info") out = LogLevel::Info;
    else if (name == "debug") out = LogLevel::Debug;
    else return false;
    return true;
}

void log_message(LogLevel level, const std::string& msg) {
    if (level > log_threshold()) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[%s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

}  // namespace f2p
