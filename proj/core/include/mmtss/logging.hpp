// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_LOGGING_HPP_
#define MMTSS_LOGGING_HPP_

#include <string>

namespace mmtss::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kQuiet = 4 };

// Threshold comes from the MMTSS_LOG environment variable
// (debug|info|warn|error|quiet); default is warn.
Level threshold();
void set_threshold(Level level);

void write(Level level, const std::string& msg);

inline void debug(const std::string& msg) { write(Level::kDebug, msg); }
inline void info(const std::string& msg) { write(Level::kInfo, msg); }
inline void warn(const std::string& msg) { write(Level::kWarn, msg); }
inline void error(const std::string& msg) { write(Level::kError, msg); }

}  // namespace mmtss::log

#endif  // MMTSS_LOGGING_HPP_
