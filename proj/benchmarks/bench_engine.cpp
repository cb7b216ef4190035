#include <benchmark/benchmark.h>

#include "wakeup/adversary.hpp"
#include "wakeup/engine.hpp"

namespace {

using namespace wakeup;

ProtocolConfig static_config() {
    return ProtocolConfig({256, 0.5, 8, ClockSetting::Static, ProtocolKind::AimHigh, 0.5});
}

ProtocolConfig dynamic_config() {
    return ProtocolConfig({64, 0.6, 4, ClockSetting::Dynamic, ProtocolKind::AimHigh, 0.5});
}

void BM_SimulateStatic(benchmark::State& state) {
    const auto config = static_config();
    const auto schedule = all_at_once(static_cast<std::uint64_t>(state.range(0)));
    std::uint64_t seed = 1, slots = 0;
    for (auto _ : state) {
        const auto run = simulate(config, schedule, seed++);
        slots += run.slots;
        benchmark::DoNotOptimize(run.latency);
    }
    state.counters["slots_per_s"] = benchmark::Counter(static_cast<double>(slots), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateStatic)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SimulateBatchedStatic(benchmark::State& state) {
    const auto config = static_config();
    const auto schedule = all_at_once(static_cast<std::uint64_t>(state.range(0)));
    std::uint64_t seed = 1, slots = 0;
    for (auto _ : state) {
        const auto run = simulate_batched(config, schedule, seed++);
        slots += run.slots;
        benchmark::DoNotOptimize(run.latency);
    }
    state.counters["slots_per_s"] = benchmark::Counter(static_cast<double>(slots), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateBatchedStatic)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SimulateDynamicTwoBurst(benchmark::State& state) {
    const auto config = dynamic_config();
    const auto schedule = two_burst(8, 200, 4);
    const bool batched = state.range(0) != 0;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const auto run = batched ? simulate_batched(config, schedule, seed++) : simulate(config, schedule, seed++);
        benchmark::DoNotOptimize(run.latency);
    }
}
BENCHMARK(BM_SimulateDynamicTwoBurst)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_Ensemble(benchmark::State& state) {
    const auto config = dynamic_config();
    const auto schedule = two_burst(8, 200, 4);
    EnsembleOptions options;
    options.path = SimulationPath::Batched;
    options.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        const auto result = run_ensemble(config, schedule, 1000, 7, options);
        benchmark::DoNotOptimize(result.stats.mean_latency);
    }
}
BENCHMARK(BM_Ensemble)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace
