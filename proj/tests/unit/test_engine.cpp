#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "binomial.hpp"
#include "oracles/static_markov.hpp"
#include "wakeup/analytics.hpp"
#include "wakeup/engine.hpp"
#include "wakeup/error.hpp"

using namespace wakeup;

namespace {

ProtocolConfig make(std::int64_t cost, double eps, std::int64_t d,
                    ClockSetting setting = ClockSetting::Static,
                    ProtocolKind kind = ProtocolKind::AimHigh, double p = 0.5) {
    return ProtocolConfig({cost, eps, d, setting, kind, p});
}

}  // namespace

TEST(Simulate, SinglePacketNeverCollides) {
    for (auto kind : {ProtocolKind::AimHigh, ProtocolKind::IteratedAimHigh,
                      ProtocolKind::BackoffPerSlot, ProtocolKind::ConstantProb}) {
        const auto c = make(16, 0.5, 2, ClockSetting::Static, kind, 0.3);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto r = simulate(c, all_at_once(1), seed);
            EXPECT_EQ(r.termination, Termination::Success);
            EXPECT_EQ(r.collision_count, 0u);
            const auto b = simulate_batched(c, all_at_once(1), seed);
            EXPECT_EQ(b.termination, Termination::Success);
            EXPECT_EQ(b.collision_count, 0u);
        }
    }
}

TEST(Simulate, CertainSendersCollideEverySlot) {
    const auto c = make(16, 0.5, 2, ClockSetting::Static, ProtocolKind::ConstantProb, 1.0);
    SimulationOptions o;
    o.slot_cap = 10;
    for (const auto& r : {simulate(c, all_at_once(2), 5, o), simulate_batched(c, all_at_once(2), 5, o)}) {
        EXPECT_EQ(r.termination, Termination::SlotCapExceeded);
        EXPECT_EQ(r.collision_count, 10u);
        EXPECT_EQ(r.collision_cost, 160u);
        EXPECT_EQ(r.latency, 10u);
        EXPECT_EQ(r.contention_trace.size(), 10u);
    }
}

TEST(Simulate, Deterministic) {
    const auto c = make(64, 0.5, 4, ClockSetting::Dynamic);
    const auto s = two_burst(12, 40, 5);
    const auto a = simulate(c, s, 99);
    const auto b = simulate(c, s, 99);
    EXPECT_EQ(a.latency, b.latency);
    EXPECT_EQ(a.contention_trace, b.contention_trace);
    EXPECT_EQ(a.outcome_trace, b.outcome_trace);
    EXPECT_EQ(a.winner_batch, b.winner_batch);
    const auto x = simulate_batched(c, s, 99);
    const auto y = simulate_batched(c, s, 99);
    EXPECT_EQ(x.contention_trace, y.contention_trace);
    EXPECT_EQ(x.latency, y.latency);
}

TEST(Simulate, TraceInvariants) {
    const auto c = make(16, 0.5, 2);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = simulate(c, all_at_once(8), seed);
        ASSERT_EQ(r.termination, Termination::Success);
        ASSERT_EQ(r.outcome_trace.size(), r.success_slot);
        ASSERT_EQ(r.contention_trace.size(), r.success_slot);
        EXPECT_EQ(r.outcome_trace.back(), SlotKind::Success);
        std::uint64_t collisions = 0;
        for (std::size_t i = 0; i + 1 < r.outcome_trace.size(); ++i) {
            EXPECT_NE(r.outcome_trace[i], SlotKind::Success);
            collisions += r.outcome_trace[i] == SlotKind::Collision;
        }
        EXPECT_EQ(collisions, r.collision_count);
        EXPECT_EQ(r.collision_cost, 16 * r.collision_count);
        EXPECT_EQ(r.latency, r.success_slot);
        EXPECT_EQ(r.slots, r.success_slot);
        double sum = 0.0;
        for (double v : r.contention_trace) sum += v;
        EXPECT_NEAR(sum, r.contention_sum, 1e-9 * std::max(1.0, sum));
    }
}

TEST(Simulate, StaticContentionIsNTimesCommonProbability) {
    const auto c = make(16, 0.5, 2);
    const auto r = simulate(c, all_at_once(5), 3);
    PacketState s = init_state(c, 1);
    for (std::size_t t = 0; t < r.contention_trace.size(); ++t) {
        EXPECT_NEAR(r.contention_trace[t], 5.0 * send_probability(s, c, t), 1e-12) << t;
        s = step(s, c, false);
    }
}

TEST(Simulate, StaticNeedsOneBatch) {
    const auto c = make(16, 0.5, 2);
    EXPECT_THROW(simulate(c, two_burst(4, 5, 2), 1), ConfigError);
    EXPECT_THROW(simulate_batched(c, two_burst(4, 5, 2), 1), ConfigError);
    SimulationOptions o;
    o.slot_cap = 0;
    EXPECT_THROW(simulate(c, all_at_once(2), 1, o), ConfigError);
}

TEST(Simulate, DynamicPacketsSendInTheirActivationSlot) {
    // Backoff sends with probability 1 in its activation slot: a lone packet
    // injected at slot 1 wins immediately.
    const auto c = make(16, 0.5, 2, ClockSetting::Dynamic, ProtocolKind::BackoffPerSlot);
    const auto r = simulate(c, all_at_once(1), 7);
    EXPECT_EQ(r.success_slot, 1u);
    // Two packets at slot 1 and one at slot 3: slot 3 sees contention >= 1.
    const auto r2 = simulate(c, InjectionSchedule({{1, 2}, {3, 1}}), 11);
    if (r2.success_slot >= 3) EXPECT_GE(r2.contention_trace[2], 1.0);
}

TEST(Simulate, ObserverSeesEverySlot) {
    const auto c = make(64, 0.5, 2, ClockSetting::Dynamic);
    std::uint64_t seen = 0, last = 0;
    bool ordered = true;
    SimulationOptions o;
    o.record_traces = false;
    o.observer = [&](const SlotView& v) {
        ordered = ordered && v.slot == last + 1;
        last = v.slot;
        ++seen;
    };
    const auto r = simulate_batched(c, drip(6, 10), 21, o);
    EXPECT_TRUE(ordered);
    EXPECT_EQ(seen, r.slots);
    EXPECT_TRUE(r.contention_trace.empty());
}

TEST(Batched, SingleBatchSuccessFrequency) {
    // 64 senders at 1/2: P(exactly one) = 64 / 2^64, so no success in 10^6 slots.
    detail::BinomialSampler sampler;
    Rng rng(1);
    int lone = 0;
    double total = 0.0;
    const int slots = 1'000'000;
    for (int i = 0; i < slots; ++i) {
        const auto k = sampler(rng, 64, 0.5);
        lone += k == 1;
        total += static_cast<double>(k);
    }
    EXPECT_EQ(lone, 0);
    EXPECT_NEAR(total / slots, 32.0, 3.0 * std::sqrt(16.0 / slots));
}

TEST(Batched, SmallBatchSuccessFrequency) {
    detail::BinomialSampler sampler;
    Rng rng(2);
    const double want = 4 * 0.5 * 0.125;  // 4 senders at 1/2
    int lone = 0;
    const int slots = 1'000'000;
    for (int i = 0; i < slots; ++i) lone += sampler(rng, 4, 0.5) == 1;
    const double f = static_cast<double>(lone) / slots;
    EXPECT_NEAR(f, want, 3.0 * std::sqrt(want * (1 - want) / slots));
}

TEST(Batched, CollisionFrequencyMatchesExactLaw) {
    // Batches of 3 and 5 at probabilities 0.1 and 0.2.
    std::vector<double> probs(3, 0.1);
    probs.insert(probs.end(), 5, 0.2);
    const double want = analytics::exact_collision_prob(probs);
    detail::BinomialSampler a, b;
    Rng rng(3);
    int collisions = 0;
    const int slots = 1'000'000;
    for (int i = 0; i < slots; ++i) collisions += a(rng, 3, 0.1) + b(rng, 5, 0.2) >= 2;
    const double f = static_cast<double>(collisions) / slots;
    EXPECT_NEAR(f, want, 3.0 * std::sqrt(want * (1 - want) / slots));
}

TEST(Batched, LargeMeanUsesFullRange) {
    detail::BinomialSampler sampler;
    Rng rng(4);
    double sum = 0.0;
    const int draws = 200'000;
    for (int i = 0; i < draws; ++i) {
        const auto k = sampler(rng, 1000, 0.3);
        ASSERT_LE(k, 1000u);
        sum += static_cast<double>(k);
    }
    EXPECT_NEAR(sum / draws, 300.0, 3.0 * std::sqrt(210.0 / draws));
}

TEST(GoodWindowMarker, RangeArithmetic) {
    RunRecord r;
    r.setting = ClockSetting::Static;
    r.termination = Termination::Success;
    r.success_exponent = 10.0;
    EXPECT_TRUE(good_window_marker(r, 10, 16));
    r.success_exponent = 5.0;
    EXPECT_FALSE(good_window_marker(r, 10, 16));
    r.setting = ClockSetting::Dynamic;
    EXPECT_THROW(good_window_marker(r, 10, 16), std::invalid_argument);
}

TEST(Ensemble, SingleTrialStats) {
    const auto c = make(16, 0.5, 2);
    const auto res = run_ensemble(c, all_at_once(4), 1, 42, {});
    const auto r = simulate(c, all_at_once(4), derive_trial_seed(42, 0));
    EXPECT_EQ(res.stats.trials, 1u);
    EXPECT_DOUBLE_EQ(res.stats.mean_latency, static_cast<double>(r.latency));
    EXPECT_DOUBLE_EQ(res.stats.latency_p50, static_cast<double>(r.latency));
    EXPECT_DOUBLE_EQ(res.stats.latency_stddev, 0.0);
    EXPECT_DOUBLE_EQ(res.stats.mean_collision_cost, static_cast<double>(r.collision_cost));
    EXPECT_EQ(res.runs[0].seed, derive_trial_seed(42, 0));
}

TEST(Ensemble, ThreadCountDoesNotChangeResults) {
    const auto c = make(64, 0.5, 2, ClockSetting::Dynamic);
    const auto s = drip(10, 5);
    EnsembleOptions one;
    one.threads = 1;
    EnsembleOptions four;
    four.threads = 4;
    const auto a = run_ensemble(c, s, 64, 7, one);
    const auto b = run_ensemble(c, s, 64, 7, four);
    EXPECT_EQ(a.stats, b.stats);
    EXPECT_EQ(a.runs, b.runs);
    EXPECT_THROW(run_ensemble(c, s, 0, 7, one), ConfigError);
}

TEST(Ensemble, QuantilesAreOrdered) {
    const auto res = run_ensemble(make(16, 0.5, 2), all_at_once(6), 300, 3, {});
    EXPECT_LE(res.stats.latency_p50, res.stats.latency_p95);
    EXPECT_LE(res.stats.latency_p95, res.stats.latency_p99);
    ASSERT_TRUE(res.stats.frac_success_at_or_before_good_window.has_value());
    EXPECT_GE(*res.stats.frac_success_at_or_before_good_window, 0.0);
    EXPECT_LE(*res.stats.frac_success_at_or_before_good_window, 1.0);
    EXPECT_DOUBLE_EQ(res.stats.frac_terminated, 1.0);
}

TEST(Ensemble, ThreadsFromEnvironment) {
    ::setenv("WAKEUP_SIM_THREADS", "3", 1);
    EXPECT_EQ(threads_from_environment(), 3u);
    ::setenv("WAKEUP_SIM_THREADS", "x", 1);
    EXPECT_THROW(threads_from_environment(), ConfigError);
    ::unsetenv("WAKEUP_SIM_THREADS");
    EXPECT_EQ(threads_from_environment(), 0u);
    EXPECT_GE(resolve_thread_count(0), 1u);
}

// Exact expectations from the Markov oracle, frozen from an independent
// evaluation, then compared against both simulation paths.
TEST(StaticOracle, FrozenValues) {
    const auto a = oracle::static_aim_high(4, 16, 0.5, 2);
    EXPECT_NEAR(a.latency, 4.845243896601027, 1e-9);
    EXPECT_NEAR(a.collisions * 16, 1.6827260615749329, 1e-9);
    EXPECT_NEAR(a.good_window, 0.9950346323429415, 1e-9);
    const auto b = oracle::static_aim_high(8, 64, 0.5, 2);
    EXPECT_NEAR(b.latency, 31.860540055217683, 1e-8);
    EXPECT_NEAR(b.collisions * 64, 0.9444503962326845, 1e-9);
    const auto c = oracle::static_aim_high(64, 256, 0.5, 8);
    EXPECT_NEAR(c.latency, 892.1683981572949, 1e-6);
    const auto d = oracle::static_aim_high(1024, 16, 0.5, 8);
    EXPECT_NEAR(d.latency, 387.1867676892119, 1e-6);
    EXPECT_NEAR(d.collisions * 16, 6175.079343785225, 1e-5);
    const auto it = oracle::static_aim_high(4, 16, 0.5, 2, true);
    EXPECT_NEAR(it.latency, 4.845234806915138, 1e-9);
}

TEST(StaticOracle, EngineMatchesExpectedLatency) {
    for (auto path : {SimulationPath::PerPacket, SimulationPath::Batched}) {
        EnsembleOptions o;
        o.path = path;
        const auto res = run_ensemble(make(64, 0.5, 2), all_at_once(8), 20000, 11, o);
        const auto want = oracle::static_aim_high(8, 64, 0.5, 2);
        EXPECT_NEAR(res.stats.mean_latency, want.latency, 4.0 * res.stats.latency_stderr());
    }
}
