// Serial reference kernels against their OpenMP versions.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <random>

#include "nlab/franchetti.hpp"
#include "nlab/kernels.hpp"

using namespace nlab;
using namespace nlab::kernels;

namespace {

CMatrix random_matrix(long n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  CMatrix m(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) m(i, j) = {nd(rng), nd(rng)};
  }
  return m;
}

template <bool Parallel>
void BM_matvec(benchmark::State& state) {
  const long n = state.range(0);
  const auto op = make_dense<Scalar>(random_matrix(n));
  std::vector<Scalar> x(static_cast<std::size_t>(n), Scalar(1.0, 0.5)), y(x.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      parallel::matvec<Scalar>(op, x, y);
    } else {
      serial::matvec<Scalar>(op, x, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <bool Parallel>
void BM_two_valued(benchmark::State& state) {
  const auto mesh = two_valued_mesh(Scalar(1.0, 0.5));
  TwoValuedProblem pr{static_cast<std::size_t>(state.range(0)), Scalar(1.0, 0.5), 3.0, mesh};
  for (auto _ : state) {
    auto r = Parallel ? parallel::scan_two_valued(pr) : serial::scan_two_valued(pr);
    benchmark::DoNotOptimize(r.value);
  }
}

template <bool Parallel>
void BM_signs(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const std::size_t rows = 32;
  const auto m = random_matrix(static_cast<long>(rows));
  std::vector<Scalar> cols(rows * k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < rows; ++i) cols[c * rows + i] = m(static_cast<long>(i), static_cast<long>(c));
  }
  std::vector<double> rw(rows, 1.0 / rows), cw(k, 1.0 / rows);
  SignEnumProblem pr{rows, k, cols, rw, cw, 1.5, 0.5 / rows};
  for (auto _ : state) {
    auto r = Parallel ? parallel::enumerate_signs(pr) : serial::enumerate_signs(pr);
    benchmark::DoNotOptimize(r.value);
  }
}

}  // namespace

BENCHMARK(BM_matvec<false>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_matvec<true>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_two_valued<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_two_valued<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_signs<false>)->Arg(12)->Arg(16);
BENCHMARK(BM_signs<true>)->Arg(12)->Arg(16);

BENCHMARK_MAIN();
