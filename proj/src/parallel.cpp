#include "twm/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace twm {
namespace {

int initial_thread_count() {
  if (const char* env = std::getenv("TWM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return omp_get_max_threads();
}

int& current() {
  static int threads = initial_thread_count();
  return threads;
}

}  // namespace

int thread_count() { return current(); }

void set_thread_count(int threads) { current() = threads > 0 ? threads : initial_thread_count(); }

}  // namespace twm
