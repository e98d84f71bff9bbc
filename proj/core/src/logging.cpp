// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/logging.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace mmtss::log {

namespace {

Level parse_env() {
  const char* env = std::getenv("MMTSS_LOG");
  if (env == nullptr) return Level::kWarn;
  const std::string v(env);
  if (v == "debug") return Level::kDebug;
  if (v == "info") return Level::kInfo;
  if (v == "warn") return Level::kWarn;
  if (v == "error") return Level::kError;
  if (v == "quiet") return Level::kQuiet;
  return Level::kWarn;
}

std::atomic<Level>& threshold_slot() {
  static std::atomic<Level> level{parse_env()};
  return level;
}

const char* tag(Level level) {
  switch (level) {
    case Level::kDebug: return "D";
    case Level::kInfo: return "I";
    case Level::kWarn: return "W";
    case Level::kError: return "E";
    default: return "?";
  }
}

}  // namespace

Level threshold() { return threshold_slot().load(std::memory_order_relaxed); }

void set_threshold(Level level) {
  threshold_slot().store(level, std::memory_order_relaxed);
}

void write(Level level, const std::string& msg) {
  if (level < threshold()) return;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::fprintf(stderr, "[mmtss %s] %s\n", tag(level), msg.c_str());
}

}  // namespace mmtss::log
