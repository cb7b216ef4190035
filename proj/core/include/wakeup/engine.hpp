#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wakeup/adversary.hpp"
#include "wakeup/channel.hpp"
#include "wakeup/protocols.hpp"

namespace wakeup {

enum class Termination : std::uint8_t { Success, SlotCapExceeded };

std::string_view to_string(Termination t) noexcept;

/// What an observer sees after each slot is resolved. Protocol state
/// machines never see this; they only learn whether a success happened.
struct SlotView {
    std::uint64_t slot = 0;
    double contention = 0.0;
    SlotKind kind = SlotKind::Empty;
    std::uint64_t active = 0;   ///< n(t)
    bool all_halving = false;   ///< every active packet is in its halving phase
};

using SlotObserver = std::function<void(const SlotView&)>;

struct SimulationOptions {
    std::uint64_t slot_cap = 100'000'000;
    /// Keep per-slot contention and outcome traces in the RunRecord. Off for
    /// long ensembles; observers still see every slot.
    bool record_traces = true;
    SlotObserver observer;
};

struct RunRecord {
    /// Slots from the first injection up to the first success, inclusive.
    /// Equals the slot cap when the run was cut off.
    std::uint64_t latency = 0;
    std::uint64_t collision_count = 0;
    std::uint64_t collision_cost = 0;
    std::vector<double> contention_trace;  ///< index t-1 holds Con(t)
    std::vector<SlotKind> outcome_trace;
    Termination termination = Termination::SlotCapExceeded;
    std::uint64_t success_slot = 0;  ///< 0 when no success
    std::optional<std::uint32_t> winner_batch;
    std::uint64_t seed = 0;

    ClockSetting setting = ClockSetting::Static;
    Phase success_phase = Phase::Terminated;  ///< winner's phase in the success slot
    double success_exponent = 0.0;            ///< winner's lg window in the success slot

    // Whole-run contention sums, kept even when traces are not recorded.
    std::uint64_t slots = 0;
    double contention_sum = 0.0;
    double contention_sq_sum = 0.0;
};

/// Reference path: every packet owns a PacketState and flips its own coin.
/// A deterministic function of (config, schedule, seed, options.slot_cap).
///
/// Static setting requires every packet to be active in slot 1 (a single
/// entry); packets then share sample boundaries. In the dynamic setting a
/// packet's sample clock starts in its activation slot, and it may send in
/// that slot.
RunRecord simulate(const ProtocolConfig& config, const InjectionSchedule& schedule,
                   std::uint64_t seed, const SimulationOptions& options = {});

/// Fast path for batch-fair protocols: one state per batch and one binomial
/// draw per batch per slot. Same distribution of RunRecord as `simulate`,
/// different sample paths.
RunRecord simulate_batched(const ProtocolConfig& config, const InjectionSchedule& schedule,
                           std::uint64_t seed, const SimulationOptions& options = {});

/// True iff the success happened while the common window was at least
/// n*sqrt(C). Only meaningful for static runs; throws std::invalid_argument
/// for dynamic ones. Runs without a success return false.
bool good_window_marker(const RunRecord& run, std::uint64_t n, std::int64_t cost);

// ---- ensembles ------------------------------------------------------------

enum class SimulationPath : std::uint8_t { PerPacket, Batched };

struct RunSummary {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t latency = 0;
    std::uint64_t collisions = 0;
    std::uint64_t collision_cost = 0;
    Termination termination = Termination::SlotCapExceeded;
    std::uint64_t success_slot = 0;
    std::optional<std::uint32_t> winner_batch;

    Phase success_phase = Phase::Terminated;
    double success_exponent = 0.0;
    std::optional<bool> good_window;  ///< static Aim-High runs only
    std::uint64_t slots = 0;
    double contention_sum = 0.0;
    double contention_sq_sum = 0.0;

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

RunSummary summarize_run(const RunRecord& run, std::uint64_t trial, const ProtocolConfig& config,
                         std::uint64_t n);

struct EnsembleStats {
    std::uint64_t trials = 0;
    double mean_latency = 0.0;
    double latency_stddev = 0.0;  ///< sample standard deviation (0 for one trial)
    double mean_collision_cost = 0.0;
    double mean_collisions = 0.0;
    double latency_p50 = 0.0;
    double latency_p95 = 0.0;
    double latency_p99 = 0.0;
    /// Present for static Aim-High-family ensembles.
    std::optional<double> frac_success_at_or_before_good_window;
    double frac_terminated = 0.0;

    double latency_stderr() const noexcept;

    friend bool operator==(const EnsembleStats&, const EnsembleStats&) = default;
};

/// Aggregates in trial order; the result does not depend on how the runs
/// were scheduled. Quantiles use the nearest-rank rule on latencies.
EnsembleStats aggregate(const std::vector<RunSummary>& runs);

struct EnsembleOptions {
    std::uint64_t slot_cap = 100'000'000;
    unsigned threads = 0;  ///< 0 = hardware concurrency
    SimulationPath path = SimulationPath::PerPacket;
};

struct EnsembleResult {
    EnsembleStats stats;
    std::vector<RunSummary> runs;  ///< indexed by trial
};

/// Trial i runs with seed derive_trial_seed(master_seed, i).
EnsembleResult run_ensemble(const ProtocolConfig& config, const InjectionSchedule& schedule,
                            std::uint64_t trials, std::uint64_t master_seed,
                            const EnsembleOptions& options = {});

/// 0 maps to std::thread::hardware_concurrency() (at least 1).
unsigned resolve_thread_count(unsigned requested) noexcept;

/// Reads WAKEUP_SIM_THREADS (0 or unset = auto). Throws ConfigError on junk.
unsigned threads_from_environment();

}  // namespace wakeup
