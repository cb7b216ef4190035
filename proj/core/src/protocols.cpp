#include "wakeup/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wakeup/error.hpp"
#include "wakeup/numeric.hpp"

namespace wakeup {

std::string_view to_string(ClockSetting s) noexcept {
    return s == ClockSetting::Static ? "static" : "dynamic";
}

std::string_view to_string(ProtocolKind k) noexcept {
    switch (k) {
        case ProtocolKind::AimHigh: return "aim-high";
        case ProtocolKind::IteratedAimHigh: return "iterated-aim-high";
        case ProtocolKind::BackoffPerSlot: return "backoff";
        case ProtocolKind::ConstantProb: return "constant";
    }
    return "?";
}

std::string_view to_string(Phase p) noexcept {
    switch (p) {
        case Phase::Halving: return "halving";
        case Phase::Doubling: return "doubling";
        case Phase::Terminated: return "terminated";
    }
    return "?";
}

ProtocolConfig::ProtocolConfig(const Params& params) : params_(params) {
    if (params.cost < 4) {
        throw ConfigError("C", "C must be ≥ 4 (got " + std::to_string(params.cost) + ")");
    }
    if (!(params.epsilon > 0.0 && params.epsilon < 1.0)) {
        throw ConfigError("epsilon", "epsilon must lie in (0, 1)");
    }
    if (params.d < 1) {
        throw ConfigError("d", "d must be a positive integer");
    }
    if (params.kind == ProtocolKind::ConstantProb &&
        !(params.constant_p > 0.0 && params.constant_p <= 1.0)) {
        throw ConfigError("p", "constant sending probability must lie in (0, 1]");
    }
    const auto c = static_cast<double>(params.cost);
    x0_ = std::pow(c, params.epsilon);
    sqrt_cost_ = std::sqrt(c);
    ln_cost_ = std::log(c);
}

PacketState init_state(const ProtocolConfig& config, std::uint64_t activation_slot) {
    PacketState s;
    s.activation_slot = activation_slot;
    if (config.is_aim_high_family()) {
        s.exponent = config.initial_exponent();
        s.sample_len = sample_length(config, s.exponent, Phase::Halving);
    }
    return s;
}

double send_probability(const PacketState& state, const ProtocolConfig& config,
                        std::uint64_t slots_since_activation) noexcept {
    if (state.phase == Phase::Terminated) return 0.0;
    switch (config.kind()) {
        case ProtocolKind::AimHigh:
        case ProtocolKind::IteratedAimHigh:
            return std::exp2(-state.exponent);
        case ProtocolKind::BackoffPerSlot:
            return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(
                                       slots_since_activation, 2000)));
        case ProtocolKind::ConstantProb:
            return config.constant_p();
    }
    return 0.0;
}

std::uint64_t sample_length(const ProtocolConfig& config, double exponent, Phase phase) {
    double ell = 0.0;
    if (config.setting() == ClockSetting::Static) {
        if (phase == Phase::Halving && exponent < 1.0) {
            throw std::domain_error("static halving sample with window below 2 (exponent " +
                                    std::to_string(exponent) + ")");
        }
        ell = exponent * std::numbers::ln2;
    } else {
        ell = config.ln_cost();
    }
    const auto d = static_cast<double>(config.d());
    const double raw = phase == Phase::Halving ? d * config.sqrt_cost() * ell : d * ell;
    return std::max<std::uint64_t>(1, ceil_count(raw));
}

namespace {

// Ends the current sample; returns the state at the start of the next one.
PacketState next_sample(PacketState s, const ProtocolConfig& config) {
    s.slot_in_sample = 0;
    if (s.phase == Phase::Halving) {
        if (s.exponent - 1.0 >= 1.0) {
            s.exponent -= 1.0;
        } else {
            s.phase = Phase::Doubling;
            s.exponent = 2.0;
        }
    } else {
        s.exponent += 1.0;
    }
    s.sample_len = sample_length(config, s.exponent, s.phase);
    return s;
}

PacketState terminated(PacketState s) {
    s.phase = Phase::Terminated;
    return s;
}

}  // namespace

PacketState advance(const PacketState& state, const ProtocolConfig& config, bool success_observed) {
    if (success_observed || state.phase == Phase::Terminated) return terminated(state);
    PacketState s = state;
    if (++s.slot_in_sample < s.sample_len) return s;
    return next_sample(s, config);
}

PacketState iterated_advance(const PacketState& state, const ProtocolConfig& config,
                             bool success_observed) {
    if (success_observed || state.phase == Phase::Terminated) return terminated(state);
    PacketState s = state;
    if (++s.slot_in_sample < s.sample_len) return s;
    if (s.phase == Phase::Halving) return next_sample(s, config);

    // Doubling sample finished: the truncated phase of iteration j holds 2^j samples.
    ++s.samples_in_truncated;
    const std::uint64_t budget =
        s.iteration >= 63 ? UINT64_MAX : (std::uint64_t{1} << s.iteration);
    if (s.samples_in_truncated < budget) return next_sample(s, config);

    s.iteration += 1;
    s.samples_in_truncated = 0;
    s.slot_in_sample = 0;
    s.phase = Phase::Halving;
    s.exponent = config.initial_exponent();
    s.sample_len = sample_length(config, s.exponent, Phase::Halving);
    return s;
}

PacketState step(const PacketState& state, const ProtocolConfig& config, bool success_observed) {
    switch (config.kind()) {
        case ProtocolKind::AimHigh: return advance(state, config, success_observed);
        case ProtocolKind::IteratedAimHigh: return iterated_advance(state, config, success_observed);
        case ProtocolKind::BackoffPerSlot:
        case ProtocolKind::ConstantProb:
            return success_observed ? terminated(state) : state;
    }
    return state;
}

}  // namespace wakeup
