// Copyright 2026 The clocksim Authors
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

#include "clocksim/clockwork.h"
#include "clocksim/metrology.h"

using namespace clocksim;

namespace {

constexpr uint64_t R = 254;
constexpr uint64_t S = 14;

void BM_generate_batch(benchmark::State &state) {
    SpectralModel model = spectral_model(2 * R * S);
    AccuracyModel acc{1.0 / (R * S), 0.75, FailureMode::UniformFullRange};
    uint64_t samples = static_cast<uint64_t>(state.range(0));
    uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_batch(acc, model, R, S, samples, seed++));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(samples));
}
BENCHMARK(BM_generate_batch)->Arg(200)->Arg(10000);

void BM_decide(benchmark::State &state) {
    SpectralModel model = spectral_model(2 * R * S);
    AccuracyModel acc{1.0 / (R * S), 0.75, FailureMode::UniformFullRange};
    SampleBatch batch = generate_batch(acc, model, R, S, static_cast<uint64_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decide(batch));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_decide)->Arg(200)->Arg(10000);

void BM_phase_distribution(benchmark::State &state) {
    PhaseEstimationSetup setup{static_cast<uint32_t>(state.range(0)), {1.0 / 3, 0.7}, {0.6, 0.8}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(phase_estimate_distribution(setup));
    }
}
BENCHMARK(BM_phase_distribution)->Arg(4)->Arg(8)->Arg(14);

void BM_phase_sampling(benchmark::State &state) {
    PhaseEstimationSetup setup{10, {1.0 / 3}, {1.0}};
    PhaseSampler sampler(setup);
    Rng rng(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sampler.sample(rng));
    }
}
BENCHMARK(BM_phase_sampling);

}  // namespace
