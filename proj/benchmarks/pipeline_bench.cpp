#include <benchmark/benchmark.h>

#include "eembi/pipeline.hpp"
#include "eembi/simulate.hpp"

namespace {

void BM_OracleEembiPc(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const eembi::Graph dag = eembi::random_dag(n, 0.3, 9);
  const eembi::DSeparationOracle oracle(eembi::augmented_graph(dag));
  for (auto _ : state) benchmark::DoNotOptimize(eembi::eembi_pc(oracle, n, 0.5, 0.5));
}
BENCHMARK(BM_OracleEembiPc)->DenseRange(4, 12, 4);

void BM_EembiLinear(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto rows = static_cast<std::size_t>(state.range(1));
  const eembi::Scm scm = eembi::make_linear_scm(eembi::random_dag(n, 0.25, 4), 5);
  const eembi::Sample s = eembi::sample(scm, rows, 6);
  for (auto _ : state) benchmark::DoNotOptimize(eembi::eembi(s.data));
}
BENCHMARK(BM_EembiLinear)->Args({6, 1000})->Args({10, 1000})->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace
