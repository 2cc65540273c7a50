#include "slickseg/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <set>

namespace slickseg {

namespace {

LogLevel parse_level() {
  const char* env = std::getenv("SLICKSEG_LOG");
  if (!env) return LogLevel::info;
  const std::string v(env);
  if (v == "error") return LogLevel::error;
  if (v == "debug") return LogLevel::debug;
  if (v == "info") return LogLevel::info;
  std::cerr << "[slickseg] unknown SLICKSEG_LOG value '" << v
            << "', using info\n";
  return LogLevel::info;
}

std::mutex g_mutex;

void emit(const char* tag, const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[slickseg] " << tag << ": " << msg << "\n";
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level();
  return level;
}

void log_error(const std::string& msg) { emit("error", msg); }

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) emit("info", msg);
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) emit("debug", msg);
}

void warn_once(const std::string& key, const std::string& msg) {
  static std::mutex once_mutex;
  static std::set<std::string> seen;
  {
    std::lock_guard<std::mutex> lock(once_mutex);
    if (!seen.insert(key).second) return;
  }
  log_info(msg);
}

}  // namespace slickseg
