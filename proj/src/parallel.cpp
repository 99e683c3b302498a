#include "ecodeps/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ecodeps {

unsigned default_jobs() {
  if (const char* env = std::getenv("ECODEPS_JOBS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace ecodeps
