#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wakeup/analytics.hpp"

namespace {

namespace an = wakeup::analytics;

std::vector<double> random_probs(std::size_t n) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    std::vector<double> p(n);
    for (auto& x : p) x = u(gen);
    return p;
}

void BM_ExactCollisionProb(benchmark::State& state) {
    const auto p = random_probs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(an::exact_collision_prob(p));
}
BENCHMARK(BM_ExactCollisionProb)->Arg(8)->Arg(64)->Arg(1024);

void BM_SymmetricSum(benchmark::State& state) {
    const auto p = random_probs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(an::symmetric_sum(p, 3));
}
BENCHMARK(BM_SymmetricSum)->Arg(8)->Arg(64)->Arg(1024);

void BM_VerifyEqualMaximizes(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(an::verify_equal_maximizes(n, 2, 0.5, 0.01).holds);
}
BENCHMARK(BM_VerifyEqualMaximizes)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
