#pragma once

#include <cstdint>
#include <string_view>

namespace wakeup {

enum class ClockSetting : std::uint8_t { Static, Dynamic };

enum class ProtocolKind : std::uint8_t {
    AimHigh,          ///< halving phase from 2^(C^eps), then doubling from window 4
    IteratedAimHigh,  ///< repeated halving phases with truncated doubling phases
    BackoffPerSlot,   ///< sends with probability 2^-i in the i-th slot after activation
    ConstantProb,     ///< sends with a fixed probability every slot
};

enum class Phase : std::uint8_t { Halving, Doubling, Terminated };

std::string_view to_string(ClockSetting s) noexcept;
std::string_view to_string(ProtocolKind k) noexcept;
std::string_view to_string(Phase p) noexcept;

/// Parameters shared by every packet of a run. Validated on construction;
/// the starting exponent C^eps is evaluated once and cached.
class ProtocolConfig {
public:
    struct Params {
        std::int64_t cost = 16;  ///< collision cost C, >= 4
        double epsilon = 0.4;    ///< in (0, 1)
        std::int64_t d = 8;      ///< sample-size constant, >= 1
        ClockSetting setting = ClockSetting::Static;
        ProtocolKind kind = ProtocolKind::AimHigh;
        double constant_p = 0.5;  ///< ConstantProb only, in (0, 1]
    };

    /// Throws ConfigError naming the first invalid field.
    explicit ProtocolConfig(const Params& params);

    const Params& params() const noexcept { return params_; }
    std::int64_t cost() const noexcept { return params_.cost; }
    double epsilon() const noexcept { return params_.epsilon; }
    std::int64_t d() const noexcept { return params_.d; }
    ClockSetting setting() const noexcept { return params_.setting; }
    ProtocolKind kind() const noexcept { return params_.kind; }
    double constant_p() const noexcept { return params_.constant_p; }

    /// lg of the initial window, C^eps.
    double initial_exponent() const noexcept { return x0_; }
    double sqrt_cost() const noexcept { return sqrt_cost_; }
    double ln_cost() const noexcept { return ln_cost_; }

    bool is_aim_high_family() const noexcept {
        return params_.kind == ProtocolKind::AimHigh ||
               params_.kind == ProtocolKind::IteratedAimHigh;
    }

private:
    Params params_;
    double x0_;
    double sqrt_cost_;
    double ln_cost_;
};

/// State of one packet (or, on the batched path, of one whole batch).
///
/// The window is held in the log domain: `exponent` is lg(w_cur), so the
/// sending probability is 2^-exponent. This keeps halving/doubling exact and
/// avoids overflow when 2^(C^eps) exceeds any integer type.
struct PacketState {
    Phase phase = Phase::Halving;
    double exponent = 0.0;
    std::uint64_t slot_in_sample = 0;
    std::uint64_t sample_len = 1;
    std::uint64_t activation_slot = 1;
    std::uint64_t iteration = 0;               // IteratedAimHigh only
    std::uint64_t samples_in_truncated = 0;    // IteratedAimHigh only

    double window_log2() const noexcept { return exponent; }

    friend bool operator==(const PacketState&, const PacketState&) = default;
};

/// Fresh state for a packet activated in `activation_slot`. Aim-High kinds
/// start halving at exponent C^eps; baselines keep phase = Halving as an
/// inert marker and a unit sample length.
PacketState init_state(const ProtocolConfig& config, std::uint64_t activation_slot);

/// Per-slot sending probability. `slots_since_activation` is 0 in the
/// activation slot and only matters for BackoffPerSlot.
double send_probability(const PacketState& state, const ProtocolConfig& config,
                        std::uint64_t slots_since_activation) noexcept;

/// Slots in one sample at window 2^exponent:
///   halving:  ceil(d * sqrt(C) * l)
///   doubling: ceil(d * l)
/// with l = exponent * ln 2 (static clock) or l = ln C (dynamic clock).
/// Throws std::domain_error for a static halving sample with exponent < 1.
std::uint64_t sample_length(const ProtocolConfig& config, double exponent, Phase phase);

/// One slot of Aim-High. The only feedback is whether the slot held a
/// success; a success terminates every packet.
PacketState advance(const PacketState& state, const ProtocolConfig& config, bool success_observed);

/// Same as `advance`, but iteration j's doubling phase is cut after 2^j small
/// samples, after which a new halving phase starts from C^eps.
PacketState iterated_advance(const PacketState& state, const ProtocolConfig& config,
                             bool success_observed);

/// Dispatches on config.kind(). Baselines only react to success.
PacketState step(const PacketState& state, const ProtocolConfig& config, bool success_observed);

}  // namespace wakeup
