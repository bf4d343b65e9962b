#pragma once

#include <cstdio>
#include <string>

namespace swarmnav {

// Canonical number rendering for all text outputs: 9 significant digits,
// stable under parse/re-render round trips.
inline std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace swarmnav
