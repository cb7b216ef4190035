#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace wakeup {

/// `count` packets become active in `slot` (1-based; slot 1 is the first
/// injection).
struct Injection {
    std::uint64_t slot = 1;
    std::uint64_t count = 1;

    friend bool operator==(const Injection&, const Injection&) = default;
};

/// Oblivious activation schedule: fixed before the run, never reacts to
/// channel activity. Entries have strictly increasing slots, positive counts,
/// and the first entry is at slot 1.
class InjectionSchedule {
public:
    /// Throws ConfigError("schedule", ...) on a malformed entry list.
    explicit InjectionSchedule(std::vector<Injection> entries);

    const std::vector<Injection>& entries() const noexcept { return entries_; }
    std::uint64_t total() const noexcept { return total_; }
    std::size_t batches() const noexcept { return entries_.size(); }
    std::uint64_t last_injection_slot() const noexcept { return entries_.back().slot; }

    /// n(t): packets activated in slots 1..t.
    std::uint64_t active_by(std::uint64_t slot) const noexcept;

    nlohmann::json to_json() const;
    static InjectionSchedule from_json(const nlohmann::json& doc);

    friend bool operator==(const InjectionSchedule&, const InjectionSchedule&) = default;

private:
    std::vector<Injection> entries_;
    std::uint64_t total_ = 0;
};

enum class ScheduleKind : std::uint8_t {
    AllAtOnce,
    TwoBurst,
    Drip,
    AntiGap,
    SpikeBeforeGoodContention,
    BurstThenDrip,
};

std::string to_string(ScheduleKind kind);
/// Accepts the names produced by to_string; throws ConfigError otherwise.
ScheduleKind parse_schedule_kind(const std::string& name);

InjectionSchedule all_at_once(std::uint64_t n);

/// `split` packets at slot 1, the other n - split at slot `second_slot`.
InjectionSchedule two_burst(std::uint64_t n, std::uint64_t second_slot, std::uint64_t split);

/// One packet every `interval` slots: 1, 1 + interval, ...
InjectionSchedule drip(std::uint64_t n, std::uint64_t interval);

/// One packet every gamma - 1 slots, the densest spacing that never leaves
/// gamma consecutive injection-free slots before the last injection.
InjectionSchedule anti_gap(std::uint64_t n, std::uint64_t gamma);

/// `burst` packets at slot 1, then one packet every `interval` slots.
InjectionSchedule burst_then_drip(std::uint64_t n, std::uint64_t burst, std::uint64_t interval);

/// A first batch of n' = floor(w0 / sqrt C) packets runs its halving phase;
/// the remaining n - n' packets are injected one slot before that batch alone
/// would first reach contention 3/sqrt(C). Dynamic sample lengths are used.
InjectionSchedule spike_before_good_contention(std::uint64_t n, std::int64_t cost, double epsilon,
                                               std::int64_t d);

/// Dispatch by kind. Parameters by key:
///   two_burst: t2, split   drip: interval   anti_gap: gamma
///   spike_before_good_contention: C, epsilon, d
///   burst_then_drip: burst, interval
InjectionSchedule make_schedule(ScheduleKind kind, std::uint64_t n,
                                const std::map<std::string, double>& params);

// ---- regime classification ------------------------------------------------

/// Largest t with n(t) <= threshold. Empty when n(t) never exceeds it
/// (t* = infinity); zero when n(1) already does.
struct TStar {
    std::optional<std::uint64_t> slot;
    double threshold = 0.0;

    bool unbounded() const noexcept { return !slot.has_value(); }
    /// True iff slot t lies in [1, t*].
    bool covers(std::uint64_t t) const noexcept { return !slot || t <= *slot; }
};

/// threshold = 2^(C^eps) / sqrt(C), boundary included.
TStar classify_t_star(const InjectionSchedule& schedule, std::int64_t cost, double epsilon);

/// gamma = ceil(kappa * (lg n)^(1 + 1/(2 eps)) * lg lg n), base-2 logs.
/// Requires n >= 4 and kappa > 0.
std::uint64_t gap_threshold(std::uint64_t n, double epsilon, double kappa);

struct Gap {
    std::uint64_t start = 0;
    std::uint64_t length = 0;

    friend bool operator==(const Gap&, const Gap&) = default;
};

/// Maximal injection-free runs inside [1, horizon] of length >= gamma.
std::vector<Gap> find_gaps(const InjectionSchedule& schedule, std::uint64_t gamma,
                           std::uint64_t horizon);

struct RegimeReport {
    TStar t_star;
    std::vector<Gap> gaps;
    std::uint64_t gamma = 0;
};

RegimeReport regime_report(const InjectionSchedule& schedule, std::int64_t cost, double epsilon,
                           double kappa, std::uint64_t horizon);

}  // namespace wakeup
