#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

// Diagnostics go to stderr so piped stdout stays machine-readable.
// JCLASS_LOG selects the threshold: error (default), info, debug.

namespace jclass::logdetail {

enum class Level { Error = 0, Info = 1, Debug = 2 };

inline Level threshold() {
  static const Level lvl = [] {
    const char* env = std::getenv("JCLASS_LOG");
    if (!env) return Level::Error;
    const std::string v(env);
    if (v == "debug") return Level::Debug;
    if (v == "info") return Level::Info;
    return Level::Error;
  }();
  return lvl;
}

inline bool enabled(Level lvl) { return static_cast<int>(lvl) <= static_cast<int>(threshold()); }

inline void emit(Level lvl, const std::string& msg) {
  static const char* tags[] = {"error", "info", "debug"};
  std::cerr << "[jclass:" << tags[static_cast<int>(lvl)] << "] " << msg << '\n';
}

}  // namespace jclass::logdetail

#define JCLASS_LOG_ERROR(msg)                                                 \
  do {                                                                        \
    if (::jclass::logdetail::enabled(::jclass::logdetail::Level::Error))      \
      ::jclass::logdetail::emit(::jclass::logdetail::Level::Error, (msg));    \
  } while (0)
#define JCLASS_LOG_INFO(msg)                                                  \
  do {                                                                        \
    if (::jclass::logdetail::enabled(::jclass::logdetail::Level::Info))       \
      ::jclass::logdetail::emit(::jclass::logdetail::Level::Info, (msg));     \
  } while (0)
#define JCLASS_LOG_DEBUG(msg)                                                 \
  do {                                                                        \
    if (::jclass::logdetail::enabled(::jclass::logdetail::Level::Debug))      \
      ::jclass::logdetail::emit(::jclass::logdetail::Level::Debug, (msg));    \
  } while (0)
