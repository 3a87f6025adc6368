// Copyright 2026 The omdp Authors
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

#include "omdp/equilibrium.h"
#include "omdp/harness.h"
#include "omdp/mdp.h"

namespace omdp {
namespace {

// Instance sizes are (|S|, |A|); L = 4 throughout.
void SizeArgs(benchmark::internal::Benchmark* b) {
  b->Args({3, 3})->Args({10, 4})->Args({40, 5});
}

std::pair<MdpModel, LossSet> Make(const benchmark::State& state) {
  return GenerateInstance(7, static_cast<int>(state.range(0)),
                          static_cast<int>(state.range(1)), 4, 0.1);
}

void BM_Occupancy(benchmark::State& state) {
  auto [model, losses] = Make(state);
  const StochasticPolicy pi =
      StochasticPolicy::Uniform(model.num_states(), model.num_actions());
  for (auto _ : state) benchmark::DoNotOptimize(OccupancyOfPolicy(model, pi));
}
BENCHMARK(BM_Occupancy)->Apply(SizeArgs);

void BM_SolveBias(benchmark::State& state) {
  auto [model, losses] = Make(state);
  const StochasticPolicy pi =
      StochasticPolicy::Uniform(model.num_states(), model.num_actions());
  for (auto _ : state) benchmark::DoNotOptimize(SolveBias(model, pi, losses[0]));
}
BENCHMARK(BM_SolveBias)->Apply(SizeArgs);

void BM_BestResponse(benchmark::State& state) {
  auto [model, losses] = Make(state);
  for (auto _ : state) benchmark::DoNotOptimize(BestResponse(model, losses[0]));
}
BENCHMARK(BM_BestResponse)->Apply(SizeArgs);

void BM_EpsilonBestResponse(benchmark::State& state) {
  auto [model, losses] = Make(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveEpsilonBestResponse(model, losses[0], 1e-3));
  }
}
BENCHMARK(BM_EpsilonBestResponse)->Apply(SizeArgs);

void BM_SolveGame(benchmark::State& state) {
  auto [model, losses] = Make(state);
  for (auto _ : state) benchmark::DoNotOptimize(SolveGame(model, losses));
}
BENCHMARK(BM_SolveGame)->Apply(SizeArgs);

// Per-round cost of the full harness loop (agent, adversary, certificates).
void BM_RunLoop(benchmark::State& state, const char* agent) {
  RunConfig config = ParseRunConfig(std::string(R"({"agent":{"kind":")") +
                                    agent + R"("},"horizon":1000})");
  Instance inst = BuildInstance(config);
  EquilibriumSolution eq = SolveGame(inst.model, inst.losses);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunLoop(config, inst.model, inst.losses, eq));
  }
  state.SetItemsProcessed(state.iterations() * config.horizon);
}
BENCHMARK_CAPTURE(BM_RunLoop, mdpe, "mdpe");
BENCHMARK_CAPTURE(BM_RunLoop, mdpooe, "mdpooe");
BENCHMARK_CAPTURE(BM_RunLoop, lrc, "lrc");

}  // namespace
}  // namespace omdp

BENCHMARK_MAIN();
