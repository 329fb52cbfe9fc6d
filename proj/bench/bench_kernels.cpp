// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "narrclass/lora.hpp"
#include "narrclass/metrics.hpp"

using namespace narrclass;

namespace {

lora::Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  lora::Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = u(rng);
  }
  return m;
}

template <bool Parallel>
void BM_Matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto m = random_matrix(n, n, 1);
  std::vector<double> x(n, 0.5);
  for (auto _ : state) {
    auto y = Parallel ? lora::kernels::matvec(m, x) : lora::reference::matvec(m, x);
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Parallel>
void BM_Merge(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto w = random_matrix(n, n, 2), b = random_matrix(n, 8, 3), a = random_matrix(8, n, 4);
  for (auto _ : state) {
    auto m = Parallel ? lora::kernels::add_scaled_product(w, 2.0, b, a)
                      : lora::reference::add_scaled_product(w, 2.0, b, a);
    benchmark::DoNotOptimize(m.data().data());
  }
}

template <bool Parallel>
void BM_PerDocumentF1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::vector<metrics::LabelStrings> p(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int l = 0; l < 20; ++l) {
      if (rng() % 4 == 0) p[i].insert("label " + std::to_string(l));
      if (rng() % 4 == 0) g[i].insert("label " + std::to_string(l));
    }
  }
  for (auto _ : state) {
    auto f = Parallel ? metrics::per_document_f1(p, g, 1.0) : metrics::per_document_f1_serial(p, g, 1.0);
    benchmark::DoNotOptimize(f.data());
  }
}

}  // namespace

BENCHMARK(BM_Matvec<false>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Matvec<true>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Merge<false>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Merge<true>)->Arg(256)->Arg(1024);
BENCHMARK(BM_PerDocumentF1<false>)->Arg(10000);
BENCHMARK(BM_PerDocumentF1<true>)->Arg(10000);

BENCHMARK_MAIN();
