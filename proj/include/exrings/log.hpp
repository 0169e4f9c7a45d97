#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

namespace exrings {

// Log level is read once from the EXCITON_LOG environment variable:
// debug | info | warn | error | off.  Default is warn.
enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("EXCITON_LOG");
    if (env == nullptr) return LogLevel::Warn;
    const std::string v(env);
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    if (v == "warn") return LogLevel::Warn;
    if (v == "error") return LogLevel::Error;
    if (v == "off") return LogLevel::Off;
    return LogLevel::Warn;
  }();
  return level;
}

inline void log_message(LogLevel level, const std::string& msg) {
  static std::mutex mu;
  if (level < log_level()) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[exrings:" << names[static_cast<int>(level)] << "] " << msg << '\n';
}

inline void log_debug(const std::string& msg) { log_message(LogLevel::Debug, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::Info, msg); }
inline void log_warn(const std::string& msg) { log_message(LogLevel::Warn, msg); }
inline void log_error(const std::string& msg) { log_message(LogLevel::Error, msg); }

}  // namespace exrings
