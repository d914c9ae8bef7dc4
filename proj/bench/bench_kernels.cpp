#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "boselab/kernels.hpp"
#include "boselab/multiplicity.hpp"
#include "boselab/weight_table.hpp"

using namespace boselab;

namespace {

std::vector<double> sample_row(std::int64_t M) {
  // A realistic input row: G_2 for q_j = j^2.
  auto t = WeightTable::variable(MultiplicitySpec::power_law(3, 1), M);
  std::vector<double> row;
  t.sweep_variable([&](std::int64_t, std::span<const double> next) {
    row.assign(next.begin(), next.end());
    return false;
  });
  return row;
}

template <auto Kernel>
void BM_variable_update(benchmark::State& state) {
  const std::int64_t M = state.range(0);
  const auto in = sample_row(M);
  const auto logc = kernels::log_binomial_series(1.0, M);
  std::vector<double> out(M + 1);
  for (auto _ : state) {
    Kernel(in, 1, logc, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * M * M / 2);
}

template <auto Kernel>
void BM_fixed_update(benchmark::State& state) {
  const std::int64_t M = state.range(0), N = M / 4;
  // The stored input of the level-2 update, G_3, for q_j = j^2.
  const auto table = WeightTable::fixed(MultiplicitySpec::power_law(3, 1), M, N);
  kernels::FixedRow in;
  table.sweep_fixed([&](std::int64_t level, const kernels::FixedRow& next) {
    if (level < 2) return true;
    in = next;
    return false;
  });
  const auto logc = kernels::log_binomial_series(4.0, M / 2);
  kernels::FixedRow out(M, N, 2);
  for (auto _ : state) {
    Kernel(in, 2, logc, out);
    benchmark::DoNotOptimize(&out);
  }
}

void BM_table_build(benchmark::State& state) {
  const auto variant = state.range(1) == 0 ? KernelVariant::serial_reference : KernelVariant::parallel;
  for (auto _ : state) {
    auto t = WeightTable::variable(MultiplicitySpec::power_law(3, 1), state.range(0), {.kernel = variant});
    benchmark::DoNotOptimize(t.log_energy_weight(state.range(0)));
  }
}

}  // namespace

BENCHMARK(BM_variable_update<kernels::level_update_serial>)->Name("variable_update/serial")->Arg(1000)->Arg(4000);
BENCHMARK(BM_variable_update<kernels::level_update_parallel>)->Name("variable_update/parallel")->Arg(1000)->Arg(4000);
BENCHMARK(BM_fixed_update<kernels::level_update_fixed_serial>)->Name("fixed_update/serial")->Arg(200)->Arg(600);
BENCHMARK(BM_fixed_update<kernels::level_update_fixed_parallel>)->Name("fixed_update/parallel")->Arg(200)->Arg(600);
BENCHMARK(BM_table_build)->Name("table_build")->Args({2000, 0})->Args({2000, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
