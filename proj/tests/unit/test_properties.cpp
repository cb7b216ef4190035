#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wakeup/analytics.hpp"
#include "wakeup/engine.hpp"

using namespace wakeup;

namespace {

ProtocolConfig make(std::int64_t cost, double eps, std::int64_t d,
                    ClockSetting setting = ClockSetting::Static,
                    ProtocolKind kind = ProtocolKind::AimHigh) {
    return ProtocolConfig({cost, eps, d, setting, kind, 0.5});
}

// Slots in the whole halving phase.
std::uint64_t halving_slots(const ProtocolConfig& c) {
    std::uint64_t total = 0;
    for (double x = c.initial_exponent();; x -= 1.0) {
        total += sample_length(c, x, Phase::Halving);
        if (x - 1.0 < 1.0) break;
    }
    return total;
}

}  // namespace

TEST(Properties, JensenOnRandomTraces) {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::uniform_int_distribution<int> len(1, 300);
    for (int i = 0; i < 3000; ++i) {
        std::vector<double> trace(len(gen));
        for (auto& c : trace) c = u(gen);
        EXPECT_TRUE(analytics::jensen_collision_floor(trace, 64, 1.0).holds);
    }
}

TEST(Properties, ExponentsMoveByOneAtSampleBoundaries) {
    const auto c = make(64, 0.5, 1);
    PacketState s = init_state(c, 1);
    for (int i = 0; i < 20000; ++i) {
        const PacketState next = step(s, c, false);
        if (next.exponent != s.exponent) {
            EXPECT_EQ(s.slot_in_sample + 1, s.sample_len);
            const double delta = next.exponent - s.exponent;
            if (s.phase == Phase::Halving && next.phase == Phase::Halving) EXPECT_DOUBLE_EQ(delta, -1.0);
            if (s.phase == Phase::Doubling) EXPECT_DOUBLE_EQ(delta, 1.0);
        }
        EXPECT_LT(next.slot_in_sample, next.sample_len);
        s = next;
    }
}

TEST(Properties, HalvingSuccessWithinSampleSumBound) {
    const auto c = make(64, 0.5, 2);
    const std::uint64_t bound = halving_slots(c);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto r = simulate_batched(c, all_at_once(8), seed);
        ASSERT_EQ(r.termination, Termination::Success);
        if (r.success_phase == Phase::Halving) EXPECT_LE(r.success_slot, bound);
        else EXPECT_GT(r.success_slot, bound);
    }
}

TEST(Properties, IteratedSinglePacketTerminates) {
    const auto c = make(256, 0.5, 1, ClockSetting::Static, ProtocolKind::IteratedAimHigh);
    SimulationOptions o;
    o.slot_cap = 10'000'000;
    o.record_traces = false;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        EXPECT_EQ(simulate(c, all_at_once(1), seed, o).termination, Termination::Success);
    }
}

TEST(Properties, BatchedAndPerPacketAgreeOnStaticMean) {
    const auto c = make(16, 0.5, 2);
    EnsembleOptions a, b;
    a.path = SimulationPath::PerPacket;
    b.path = SimulationPath::Batched;
    const auto x = run_ensemble(c, all_at_once(6), 10000, 3, a).stats;
    const auto y = run_ensemble(c, all_at_once(6), 10000, 4, b).stats;
    const double se = std::hypot(x.latency_stderr(), y.latency_stderr());
    EXPECT_NEAR(x.mean_latency, y.mean_latency, 3.0 * se);
}
