#include "quasirand/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace quasirand {

int worker_count() {
  if (const char* env = std::getenv("QUASIRAND_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::logic_error&) {
    }
  }
  return omp_get_max_threads();
}

}  // namespace quasirand
