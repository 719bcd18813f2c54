#include <benchmark/benchmark.h>

#include "fpp/animals.hpp"
#include "fpp/geodesics.hpp"
#include "fpp/weights.hpp"

namespace {

void BM_EdgeWeightHash(benchmark::State& state) {
  fpp::Environment env(1, fpp::DistributionSpec::exponential(1), 2);
  std::int64_t i = 0;
  for (auto _ : state) {
    fpp::EdgeId e{fpp::Point{i % 1000, i / 1000 % 1000}, 1};
    benchmark::DoNotOptimize(env.weight(e));
    ++i;
  }
}
BENCHMARK(BM_EdgeWeightHash);

void BM_ShortestPassage(benchmark::State& state) {
  const fpp::Coord n = state.range(0);
  fpp::Environment env(7, fpp::DistributionSpec::exponential(1), 2);
  for (auto _ : state) {
    auto res = fpp::shortest_passage(env, fpp::Point{0, 0}, fpp::Point{n, n});
    benchmark::DoNotOptimize(res.T);
  }
}
BENCHMARK(BM_ShortestPassage)->Arg(10)->Arg(20)->Arg(40);

void BM_GreedyAnimal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  fpp::KDependentField f{3, 1, 0.3, 2};
  fpp::AnimalInstance inst{[f](const fpp::EdgeId& e) { return f.value(e); }, n, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::exact_Nn(inst));
  }
}
BENCHMARK(BM_GreedyAnimal)->Arg(8)->Arg(10)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
