// Copyright 2026 The ktransfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "ktransfer/estimators.hpp"
#include "ktransfer/harness.hpp"
#include "ktransfer/instances.hpp"
#include "ktransfer/sampling.hpp"

namespace ktransfer {
namespace {

Instance bench_instance() {
  return make_instance({InstanceKind::kI0, 100, 25, 0});
}

void BM_DrawDataset(benchmark::State& state) {
  const auto inst = bench_instance();
  const auto n = static_cast<Count>(state.range(0));
  std::uint64_t r = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        draw_dataset(inst.rho, inst.pi_star, n, {1, 0, 0, n, r++}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DrawDataset)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_Fit(benchmark::State& state) {
  const auto inst = bench_instance();
  const auto kind = static_cast<EstimatorKind>(state.range(0));
  const auto d = draw_dataset(inst.rho, inst.pi_star, 10000, {2});
  const auto side = disclose(required_level(kind), d, inst.pi_star);
  for (auto _ : state) benchmark::DoNotOptimize(fit(kind, d, side));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Fit)->DenseRange(0, 3);

void BM_EstimateRisk(benchmark::State& state) {
  const auto inst = make_instance({InstanceKind::kI2, 16, 4, 4096});
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_risk(inst.rho, inst.pi_star,
                                           EstimatorKind::kEmpSel, 4096,
                                           {100, 3, 2, 1}));
  }
}
BENCHMARK(BM_EstimateRisk)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ktransfer

BENCHMARK_MAIN();
