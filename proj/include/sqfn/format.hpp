#pragma once

#include <cstdio>
#include <string>

namespace sqfn {

/// 17 significant digits: enough for an exact round trip of any double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace sqfn
