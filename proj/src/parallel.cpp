#include "alab/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace alab {

int thread_count() {
  if (const char* s = std::getenv("ALAB_THREADS")) {
    try {
      const int n = std::stoi(s);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

namespace detail {

void parallel_indices(std::size_t n, void (*body)(std::size_t, void*), void* ctx) {
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i), ctx);
}

}  // namespace detail

std::vector<SmithForm> batch_smith(const std::vector<IntMatrix>& mats, Exec mode) {
  return map_indices<SmithForm>(mats.size(), [&](std::size_t i) { return smith_normal_form(mats[i]); }, mode);
}

}  // namespace alab
