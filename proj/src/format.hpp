#pragma once

#include <cstdio>
#include <string>

namespace isl::detail {

// %.17g prints enough digits to round-trip an IEEE double exactly.
inline std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace isl::detail
