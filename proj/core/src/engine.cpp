#include "wakeup/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "binomial.hpp"
#include "wakeup/error.hpp"
#include "wakeup/rng.hpp"

namespace wakeup {

std::string_view to_string(Termination t) noexcept {
    return t == Termination::Success ? "success" : "slot_cap_exceeded";
}

namespace {

void check_inputs(const ProtocolConfig& config, const InjectionSchedule& schedule,
                  const SimulationOptions& options) {
    if (options.slot_cap < 1) throw ConfigError("slot_cap", "slot cap must be at least 1");
    if (config.setting() == ClockSetting::Static && schedule.batches() != 1) {
        throw ConfigError("schedule",
                          "the static setting needs every packet active in slot 1 "
                          "(use all_at_once or the dynamic setting)");
    }
}

// Sending probability with the 2^-x evaluation cached per state: the
// exponent only moves at sample boundaries.
struct ProbabilityCache {
    double exponent = std::nan("");
    double p = 0.0;

    double get(const PacketState& s, const ProtocolConfig& config, std::uint64_t slot) {
        if (s.phase == Phase::Terminated) return 0.0;
        if (config.is_aim_high_family()) {
            if (s.exponent != exponent) {
                exponent = s.exponent;
                p = std::exp2(-s.exponent);
            }
            return p;
        }
        return send_probability(s, config, slot - s.activation_slot);
    }
};

// Everything shared by both paths after the senders are known.
class Recorder {
public:
    Recorder(const ProtocolConfig& config, std::uint64_t seed, const SimulationOptions& options,
             std::uint64_t reserve)
        : options_(options), ledger_(config.cost()) {
        rec_.seed = seed;
        rec_.setting = config.setting();
        if (options.record_traces) {
            rec_.contention_trace.reserve(reserve);
            rec_.outcome_trace.reserve(reserve);
        }
    }

    void slot(std::uint64_t t, double con, const SlotOutcome& outcome, std::uint64_t active,
              bool all_halving) {
        ledger_ = ledger_.accrue(outcome);
        rec_.slots = t;
        rec_.contention_sum += con;
        rec_.contention_sq_sum += con * con;
        if (options_.record_traces) {
            rec_.contention_trace.push_back(con);
            rec_.outcome_trace.push_back(outcome.kind());
        }
        if (options_.observer) {
            options_.observer(SlotView{t, con, outcome.kind(), active, all_halving});
        }
    }

    RunRecord success(std::uint64_t t, std::uint32_t batch, const PacketState& winner) {
        rec_.termination = Termination::Success;
        rec_.success_slot = t;
        rec_.latency = t;
        rec_.winner_batch = batch;
        rec_.success_phase = winner.phase;
        rec_.success_exponent = winner.exponent;
        return finish();
    }

    RunRecord capped(std::uint64_t cap) {
        rec_.termination = Termination::SlotCapExceeded;
        rec_.latency = cap;
        return finish();
    }

private:
    RunRecord finish() {
        rec_.collision_count = ledger_.collision_count();
        rec_.collision_cost = ledger_.collision_cost();
        return std::move(rec_);
    }

    const SimulationOptions& options_;
    CostLedger ledger_;
    RunRecord rec_;
};

std::uint64_t trace_reserve(const SimulationOptions& options) {
    return options.record_traces ? std::min<std::uint64_t>(options.slot_cap, 1 << 16) : 0;
}

}  // namespace

RunRecord simulate(const ProtocolConfig& config, const InjectionSchedule& schedule,
                   std::uint64_t seed, const SimulationOptions& options) {
    check_inputs(config, schedule, options);
    Rng rng(seed);
    Recorder recorder(config, seed, options, trace_reserve(options));

    std::vector<PacketState> states;
    std::vector<PacketId> ids;
    std::vector<ProbabilityCache> probs;
    states.reserve(schedule.total());
    ids.reserve(schedule.total());
    probs.reserve(schedule.total());
    std::vector<PacketId> senders;
    std::vector<std::size_t> sender_pos;
    std::size_t next_entry = 0;
    const auto& entries = schedule.entries();

    for (std::uint64_t t = 1; t <= options.slot_cap; ++t) {
        while (next_entry < entries.size() && entries[next_entry].slot == t) {
            const PacketState fresh = init_state(config, t);
            for (std::uint64_t i = 0; i < entries[next_entry].count; ++i) {
                states.push_back(fresh);
                ids.push_back({static_cast<std::uint32_t>(next_entry), static_cast<std::uint32_t>(i)});
                probs.emplace_back();
            }
            ++next_entry;
        }

        double con = 0.0;
        bool all_halving = true;
        senders.clear();
        sender_pos.clear();
        for (std::size_t k = 0; k < states.size(); ++k) {
            const double p = probs[k].get(states[k], config, t);
            con += p;
            all_halving = all_halving && states[k].phase == Phase::Halving;
            if (rng.uniform() < p) {
                senders.push_back(ids[k]);
                sender_pos.push_back(k);
            }
        }

        const SlotOutcome outcome = resolve_slot(senders);
        recorder.slot(t, con, outcome, states.size(), all_halving);
        if (outcome.is_success()) {
            return recorder.success(t, outcome.winner()->batch, states[sender_pos.front()]);
        }
        for (auto& s : states) s = step(s, config, false);
    }
    return recorder.capped(options.slot_cap);
}

RunRecord simulate_batched(const ProtocolConfig& config, const InjectionSchedule& schedule,
                           std::uint64_t seed, const SimulationOptions& options) {
    check_inputs(config, schedule, options);
    Rng rng(seed);
    Recorder recorder(config, seed, options, trace_reserve(options));

    struct Batch {
        PacketState state;
        std::uint64_t count;
        ProbabilityCache prob;
        detail::BinomialSampler sampler;
    };
    std::vector<Batch> batches;
    batches.reserve(schedule.batches());
    std::size_t next_entry = 0;
    std::uint64_t active = 0;
    const auto& entries = schedule.entries();

    for (std::uint64_t t = 1; t <= options.slot_cap; ++t) {
        if (next_entry < entries.size() && entries[next_entry].slot == t) {
            batches.push_back({init_state(config, t), entries[next_entry].count, {}, {}});
            active += entries[next_entry].count;
            ++next_entry;
        }

        double con = 0.0;
        bool all_halving = true;
        std::uint64_t senders = 0;
        std::size_t lone = 0;
        for (std::size_t b = 0; b < batches.size(); ++b) {
            Batch& batch = batches[b];
            const double p = batch.prob.get(batch.state, config, t);
            con += static_cast<double>(batch.count) * p;
            all_halving = all_halving && batch.state.phase == Phase::Halving;
            const std::uint64_t k = batch.sampler(rng, batch.count, p);
            if (k > 0) lone = b;
            senders += k;
        }

        std::optional<PacketId> winner;
        if (senders == 1) {
            winner = PacketId{static_cast<std::uint32_t>(lone),
                              static_cast<std::uint32_t>(rng.below(batches[lone].count))};
        }
        const SlotOutcome outcome = SlotOutcome::from_count(senders, winner);
        recorder.slot(t, con, outcome, active, all_halving);
        if (outcome.is_success()) {
            return recorder.success(t, winner->batch, batches[lone].state);
        }
        for (auto& b : batches) b.state = step(b.state, config, false);
    }
    return recorder.capped(options.slot_cap);
}

bool good_window_marker(const RunRecord& run, std::uint64_t n, std::int64_t cost) {
    if (run.setting != ClockSetting::Static) {
        throw std::invalid_argument("good windows are only defined for static runs");
    }
    if (run.termination != Termination::Success) return false;
    // window >= n sqrt(C)  <=>  lg window >= lg n + lg(C)/2
    const double needed =
        std::log2(static_cast<double>(n)) + 0.5 * std::log2(static_cast<double>(cost));
    return run.success_exponent >= needed - 1e-12;
}

}  // namespace wakeup
