// Round-trip-safe text formatting for CSV output.  %.17g preserves doubles
// exactly and keeps reruns byte-identical.

#pragma once

#include <cstdio>
#include <string>

namespace pdmp {

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace pdmp
