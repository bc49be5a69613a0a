#include "urnlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace urnlab {

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("URNLAB_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return hw;
}

}  // namespace urnlab
