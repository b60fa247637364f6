#pragma once

#include <cstdio>
#include <string>

namespace mmsched::csv {

/// Shortest round-trippable-enough decimal form, '.' separator, locale independent.
inline std::string number(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace mmsched::csv
