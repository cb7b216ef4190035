#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace wakeup {

/// Identifies a packet as (batch, index within batch). Batches are numbered
/// in injection order starting at 0.
struct PacketId {
    std::uint32_t batch = 0;
    std::uint32_t index = 0;

    friend constexpr auto operator<=>(const PacketId&, const PacketId&) = default;
};

enum class SlotKind : std::uint8_t { Empty, Success, Collision };

std::string_view to_string(SlotKind kind) noexcept;

/// Outcome of one channel slot. Constructed only through the factories, so
/// the kind always agrees with the sender count and the winner is present
/// exactly for successes.
class SlotOutcome {
public:
    static SlotOutcome empty() noexcept { return SlotOutcome(SlotKind::Empty, 0, std::nullopt); }
    static SlotOutcome success(PacketId winner) noexcept {
        return SlotOutcome(SlotKind::Success, 1, winner);
    }
    static SlotOutcome collision(std::uint64_t sender_count);

    /// Classify by sender count. A success needs the winner's identity.
    static SlotOutcome from_count(std::uint64_t sender_count, std::optional<PacketId> winner);

    SlotKind kind() const noexcept { return kind_; }
    std::uint64_t sender_count() const noexcept { return senders_; }
    const std::optional<PacketId>& winner() const noexcept { return winner_; }

    bool is_success() const noexcept { return kind_ == SlotKind::Success; }
    bool is_collision() const noexcept { return kind_ == SlotKind::Collision; }

    friend bool operator==(const SlotOutcome&, const SlotOutcome&) = default;

private:
    SlotOutcome(SlotKind kind, std::uint64_t senders, std::optional<PacketId> winner) noexcept
        : kind_(kind), senders_(senders), winner_(winner) {}

    SlotKind kind_;
    std::uint64_t senders_;
    std::optional<PacketId> winner_;
};

/// Multiple-access channel rule: nobody sends -> empty, exactly one sender
/// -> success, two or more -> every transmission fails. `senders` must not
/// contain duplicates.
SlotOutcome resolve_slot(std::span<const PacketId> senders);

/// Running collision tally. Cost is kept in integer slot-equivalents and is
/// always `collision_count * unit_cost`.
class CostLedger {
public:
    /// Throws ConfigError when unit_cost < 4.
    explicit CostLedger(std::int64_t unit_cost, std::uint64_t collision_count = 0);

    std::uint64_t collision_count() const noexcept { return count_; }
    std::uint64_t collision_cost() const noexcept {
        return count_ * static_cast<std::uint64_t>(unit_cost_);
    }
    std::int64_t unit_cost() const noexcept { return unit_cost_; }

    CostLedger accrue(const SlotOutcome& outcome) const noexcept;

    friend bool operator==(const CostLedger&, const CostLedger&) = default;

private:
    std::int64_t unit_cost_;
    std::uint64_t count_ = 0;
};

inline CostLedger accrue(const CostLedger& ledger, const SlotOutcome& outcome) noexcept {
    return ledger.accrue(outcome);
}

}  // namespace wakeup
