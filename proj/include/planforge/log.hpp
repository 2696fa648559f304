#pragma once

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace planforge {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3 };

/// Level comes from the PLANFORGE_LOG environment variable
/// (debug|info|warn|error); default warn.
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("PLANFORGE_LOG");
    if (env == nullptr) return LogLevel::kWarn;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
    if (std::strcmp(env, "error") == 0) return LogLevel::kError;
    return LogLevel::kWarn;
  }();
  return level;
}

inline void log_msg(LogLevel level, const char* tag, const char* fmt, ...) {
  if (level < log_level()) return;
  std::fprintf(stderr, "[%s] ", tag);
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fprintf(stderr, "\n");
}

#define PLANFORGE_DEBUG(...) ::planforge::log_msg(::planforge::LogLevel::kDebug, "debug", __VA_ARGS__)
#define PLANFORGE_INFO(...) ::planforge::log_msg(::planforge::LogLevel::kInfo, "info", __VA_ARGS__)
#define PLANFORGE_WARN(...) ::planforge::log_msg(::planforge::LogLevel::kWarn, "warn", __VA_ARGS__)

}  // namespace planforge
