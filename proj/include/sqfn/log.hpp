#pragma once

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace sqfn::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

/// Level from SQFN_LOG (error, info, debug); error when unset or unknown.
inline Level threshold() {
  static const Level level = [] {
    const char* v = std::getenv("SQFN_LOG");
    const std::string_view s = v ? v : "";
    if (s == "debug") return Level::Debug;
    if (s == "info") return Level::Info;
    return Level::Error;
  }();
  return level;
}

inline void write(Level level, const std::string& msg) {
  if (level > threshold()) return;
  static constexpr const char* names[] = {"error", "info", "debug"};
  std::clog << "[sqfn " << names[static_cast<int>(level)] << "] " << msg << '\n';
}

inline void info(const std::string& msg) { write(Level::Info, msg); }
inline void debug(const std::string& msg) { write(Level::Debug, msg); }

}  // namespace sqfn::log
