#pragma once

#include <cstdio>
#include <string>

namespace urnlab {

/// Round-trip decimal form used in every CSV/JSON artifact (17 significant digits).
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace urnlab
