#include "fofkit/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace fofkit {

namespace {
int default_threads() {
  static const int n = omp_get_max_threads();
  return n;
}
}  // namespace

int thread_count() { return omp_get_max_threads(); }

void set_thread_count(int n) {
  omp_set_num_threads(n >= 1 ? n : default_threads());
}

int apply_thread_env() {
  default_threads();
  if (const char* env = std::getenv("FOFKIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) set_thread_count(n);
    } catch (const std::exception&) {
      // Ignore malformed values.
    }
  }
  return thread_count();
}

}  // namespace fofkit
