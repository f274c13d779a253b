#include "wpdkit/common.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace wpdkit {

unsigned max_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("WPDKIT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

}  // namespace wpdkit
