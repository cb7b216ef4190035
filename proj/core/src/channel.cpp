#include "wakeup/channel.hpp"

#include <string>

#include "wakeup/error.hpp"

namespace wakeup {

std::string_view to_string(SlotKind kind) noexcept {
    switch (kind) {
        case SlotKind::Empty: return "empty";
        case SlotKind::Success: return "success";
        case SlotKind::Collision: return "collision";
    }
    return "?";
}

SlotOutcome SlotOutcome::collision(std::uint64_t sender_count) {
    if (sender_count < 2) {
        throw std::invalid_argument("a collision needs at least two senders");
    }
    return SlotOutcome(SlotKind::Collision, sender_count, std::nullopt);
}

SlotOutcome SlotOutcome::from_count(std::uint64_t sender_count, std::optional<PacketId> winner) {
    if (sender_count == 0) return empty();
    if (sender_count == 1) {
        if (!winner) throw std::invalid_argument("a success needs a winner");
        return success(*winner);
    }
    return collision(sender_count);
}

SlotOutcome resolve_slot(std::span<const PacketId> senders) {
    switch (senders.size()) {
        case 0: return SlotOutcome::empty();
        case 1: return SlotOutcome::success(senders.front());
        default: return SlotOutcome::collision(senders.size());
    }
}

CostLedger::CostLedger(std::int64_t unit_cost, std::uint64_t collision_count)
    : unit_cost_(unit_cost), count_(collision_count) {
    if (unit_cost < 4) {
        throw ConfigError("C", "C must be ≥ 4 (got " + std::to_string(unit_cost) + ")");
    }
}

CostLedger CostLedger::accrue(const SlotOutcome& outcome) const noexcept {
    CostLedger next = *this;
    if (outcome.is_collision()) ++next.count_;
    return next;
}

}  // namespace wakeup
