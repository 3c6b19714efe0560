#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#include "alab/linalg.hpp"

namespace alab {

enum class Exec { serial, parallel };

/// Worker count: ALAB_THREADS when set to a positive integer, else the
/// OpenMP default. Only speed depends on it.
int thread_count();

namespace detail {
void parallel_indices(std::size_t n, void (*body)(std::size_t, void*), void* ctx);
}

/// Calls f(i) for i < n. Results must be written by index; the first
/// exception by index is rethrown after all workers finish.
template <class F>
void for_each_index(std::size_t n, F&& f, Exec mode) {
  if (mode == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  struct Ctx {
    std::remove_reference_t<F>* f;
    std::vector<std::exception_ptr> errors;
  } ctx{&f, std::vector<std::exception_ptr>(n)};
  detail::parallel_indices(
      n,
      [](std::size_t i, void* c) {
        auto* x = static_cast<Ctx*>(c);
        try {
          (*x->f)(i);
        } catch (...) {
          x->errors[i] = std::current_exception();
        }
      },
      &ctx);
  for (auto& e : ctx.errors)
    if (e) std::rethrow_exception(e);
}

template <class T, class F>
std::vector<T> map_indices(std::size_t n, F&& f, Exec mode) {
  std::vector<T> out(n);
  for_each_index(n, [&](std::size_t i) { out[i] = f(i); }, mode);
  return out;
}

std::vector<SmithForm> batch_smith(const std::vector<IntMatrix>& mats, Exec mode);

}  // namespace alab
