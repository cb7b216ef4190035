#include <gtest/gtest.h>

#include <vector>

#include "wakeup/channel.hpp"
#include "wakeup/error.hpp"

using namespace wakeup;

TEST(ResolveSlot, NoSendersIsEmpty) {
    const auto o = resolve_slot({});
    EXPECT_EQ(o.kind(), SlotKind::Empty);
    EXPECT_EQ(o.sender_count(), 0u);
    EXPECT_FALSE(o.winner().has_value());
}

TEST(ResolveSlot, LoneSenderWins) {
    const std::vector<PacketId> s{{0, 7}};
    const auto o = resolve_slot(s);
    EXPECT_EQ(o.kind(), SlotKind::Success);
    EXPECT_EQ(o.sender_count(), 1u);
    ASSERT_TRUE(o.winner().has_value());
    EXPECT_EQ(o.winner()->index, 7u);
}

TEST(ResolveSlot, ThreeSendersCollide) {
    const std::vector<PacketId> s{{0, 1}, {0, 4}, {0, 9}};
    const auto o = resolve_slot(s);
    EXPECT_EQ(o.kind(), SlotKind::Collision);
    EXPECT_EQ(o.sender_count(), 3u);
    EXPECT_FALSE(o.winner().has_value());
}

TEST(ResolveSlot, EveryCountUpTo64) {
    std::vector<PacketId> s;
    for (std::uint32_t k = 0; k <= 64; ++k) {
        const auto o = resolve_slot(s);
        EXPECT_EQ(o.sender_count(), k);
        const SlotKind want = k == 0 ? SlotKind::Empty : k == 1 ? SlotKind::Success : SlotKind::Collision;
        EXPECT_EQ(o.kind(), want) << k;
        EXPECT_EQ(o.winner().has_value(), k == 1);
        s.push_back({k % 3, k});
    }
}

TEST(SlotOutcome, FactoriesEnforceInvariants) {
    EXPECT_THROW(SlotOutcome::collision(1), std::invalid_argument);
    EXPECT_EQ(SlotOutcome::from_count(0, std::nullopt), SlotOutcome::empty());
    EXPECT_EQ(SlotOutcome::from_count(5, std::nullopt).kind(), SlotKind::Collision);
    EXPECT_EQ(SlotOutcome::from_count(1, PacketId{2, 3}), SlotOutcome::success({2, 3}));
    EXPECT_EQ(to_string(SlotKind::Collision), "collision");
}

TEST(CostLedger, CollisionAddsUnitCost) {
    const auto l = accrue(CostLedger(16), SlotOutcome::collision(2));
    EXPECT_EQ(l.collision_count(), 1u);
    EXPECT_EQ(l.collision_cost(), 16u);
}

TEST(CostLedger, SuccessIsFree) {
    const CostLedger l(16, 3);
    EXPECT_EQ(l.collision_cost(), 48u);
    EXPECT_EQ(accrue(l, SlotOutcome::success({0, 0})), l);
    EXPECT_EQ(accrue(l, SlotOutcome::empty()), l);
}

TEST(CostLedger, MinimumCost) {
    const auto l = accrue(CostLedger(4, 2), SlotOutcome::collision(9));
    EXPECT_EQ(l.collision_count(), 3u);
    EXPECT_EQ(l.collision_cost(), 12u);
}

TEST(CostLedger, RejectsCostBelowFour) {
    try {
        CostLedger bad(3);
        FAIL() << "accepted C = 3";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "C");
    }
}

TEST(CostLedger, FoldingCountsCollisions) {
    const std::vector<SlotOutcome> trace{SlotOutcome::empty(), SlotOutcome::collision(2),
                                         SlotOutcome::collision(4), SlotOutcome::empty(),
                                         SlotOutcome::collision(2), SlotOutcome::success({0, 1})};
    CostLedger l(10);
    for (const auto& o : trace) l = accrue(l, o);
    EXPECT_EQ(l.collision_count(), 3u);
    EXPECT_EQ(l.collision_cost(), 30u);
}
