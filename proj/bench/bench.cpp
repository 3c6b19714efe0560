// Serial versus OpenMP timings of the batch kernels.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "alab/butler.hpp"
#include "alab/chain.hpp"
#include "alab/linalg.hpp"
#include "alab/parallel.hpp"

using namespace alab;

namespace {

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, const std::function<void(Exec)>& f) {
  const double s = seconds([&] { f(Exec::serial); });
  const double p = seconds([&] { f(Exec::parallel); });
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx\n", name, s, p, p > 0 ? s / p : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  const int scale = argc > 1 ? std::atoi(argv[1]) : 1;
  std::printf("threads: %d\n", thread_count());

  std::mt19937_64 rng(1);
  std::vector<IntMatrix> mats;
  for (int t = 0; t < 4000 * scale; ++t) {
    IntMatrix A(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) A(i, j) = std::uniform_int_distribution<long>(-50, 50)(rng);
    mats.push_back(A);
  }
  row("batch smith (6x6)", [&](Exec e) { batch_smith(mats, e); });

  const auto Z = CompletelyDecomposable::free(1);
  row("instability pairs (n=60)", [&](Exec e) { instability_demo(Z, 60 * scale, 3, e); });

  ChainSpec cs;
  cs.base = StructuredGroup({Atom::z(), Atom::z()});
  cs.steps = 12 * scale;
  cs.m = 3;
  cs.P = 7;
  row("Ktf chain stage invariants", [&](Exec e) { build_chain(cs, e); });
  return 0;
}
