#include <benchmark/benchmark.h>

#include <vector>

#include "dpasim/engine.hpp"
#include "dpasim/oracle.hpp"
#include "dpasim/rng.hpp"
#include "dpasim/verify.hpp"

using namespace dpasim;

namespace {

std::vector<ViewSample> make_samples(const SystemConfig& cfg, int count) {
    Rng rng(1);
    std::vector<ViewSample> samples;
    samples.reserve(count);
    for (int i = 0; i < count; ++i) samples.push_back(random_view_sample(rng, cfg));
    return samples;
}

// per-slot decision cost; each candidate rescoring touches all users, so this
// should scale quadratically in the user count
void DpaDecide(benchmark::State& state) {
    const SystemConfig cfg = uniform_config(static_cast<int>(state.range(0)));
    const auto samples = make_samples(cfg, 256);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& s = samples[i++ & 255];
        benchmark::DoNotOptimize(dpa_decide(s.view, s.x));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(DpaDecide)->RangeMultiplier(2)->Range(1, 32)->Complexity();

void BruteforceSlotMin(benchmark::State& state) {
    const SystemConfig cfg = uniform_config(static_cast<int>(state.range(0)));
    const auto samples = make_samples(cfg, 256);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& s = samples[i++ & 255];
        benchmark::DoNotOptimize(bruteforce_slot_min(s.view, s.x));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BruteforceSlotMin)->RangeMultiplier(2)->Range(1, 32)->Complexity();

// full engine throughput at the baseline two-user operating point
void EngineRun(benchmark::State& state) {
    SystemConfig cfg = uniform_config(2);
    cfg.horizon = state.range(0);
    const DpaPolicy policy;
    for (auto _ : state) {
        cfg.seed++;
        benchmark::DoNotOptimize(run(cfg, policy));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(EngineRun)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
