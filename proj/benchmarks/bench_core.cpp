#include <benchmark/benchmark.h>

#include "qtilt/field.hpp"
#include "qtilt/matrix.hpp"

using namespace qtilt;

static void BM_rref_gf2(benchmark::State& state) {
  Field F = make_field(2);
  int n = static_cast<int>(state.range(0));
  Matrix m(F, n, n);
  std::uint64_t x = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      x ^= x << 13; x ^= x >> 7; x ^= x << 17;
      m.at(i, j) = F.from_int(static_cast<long long>(x & 1));
    }
  for (auto _ : state) benchmark::DoNotOptimize(rref(m));
}
BENCHMARK(BM_rref_gf2)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
