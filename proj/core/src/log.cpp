#include "charflow/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace charflow {

namespace {

LogLevel g_level = LogLevel::Info;
std::once_flag g_env_once;
std::mutex g_mutex;

void init_from_env() {
  const char* raw = std::getenv("CHARFLOW_LOG");
  if (raw == nullptr) return;
  if (std::strcmp(raw, "quiet") == 0 || std::strcmp(raw, "0") == 0) {
    g_level = LogLevel::Quiet;
  } else if (std::strcmp(raw, "debug") == 0 || std::strcmp(raw, "2") == 0) {
    g_level = LogLevel::Debug;
  } else {
    g_level = LogLevel::Info;
  }
}

}  // namespace

LogLevel log_level() {
  std::call_once(g_env_once, init_from_env);
  return g_level;
}

void set_log_level(LogLevel level) {
  std::call_once(g_env_once, init_from_env);
  g_level = level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) {
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[charflow] %s\n", msg.c_str());
  }
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) {
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[charflow:debug] %s\n", msg.c_str());
  }
}

}  // namespace charflow
