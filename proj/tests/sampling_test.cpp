#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "drdf/sampling.hpp"

namespace {

using drdf::Bounds;
using drdf::RandomSearchState;
using drdf::Rng;
using drdf::Vector;
using drdf::ZoneState;

TEST(ZoneState, EvenPartition) {
    const auto z = ZoneState::make({0.0, 1.0}, 4, 5);
    ASSERT_EQ(z.zone_edges.size(), 5u);
    EXPECT_EQ(z.zone_edges.front(), 0.0);
    EXPECT_EQ(z.zone_edges.back(), 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(z.zone_edges[i + 1] - z.zone_edges[i], 0.25, 1e-12);
        EXPECT_LT(z.zone_edges[i], z.zone_edges[i + 1]);
    }
    EXPECT_EQ(z.rewards, (std::vector<int>{5, 5, 5, 5}));
}

TEST(SampleBandit, PointsPerZoneAndContainment) {
    const auto z = ZoneState::make({0.0, 1.0}, 4, 5);
    Rng rng(1);
    const auto c = drdf::sample_bandit(z, 3, rng);
    ASSERT_EQ(c.size(), 20u);
    std::vector<int> per_zone(4, 0);
    for (const auto& cand : c) {
        EXPECT_EQ(cand.origin, drdf::Origin::bandit);
        ++per_zone[cand.zone];
        for (Eigen::Index j = 0; j < 3; ++j) {
            EXPECT_GE(cand.point(j), z.zone_edges[cand.zone]);
            EXPECT_LT(cand.point(j), z.zone_edges[cand.zone + 1]);
        }
    }
    EXPECT_EQ(per_zone, (std::vector<int>{5, 5, 5, 5}));
}

TEST(SampleBandit, ZeroRewardZoneSkipped) {
    auto z = ZoneState::make({0.0, 1.0}, 2, 5);
    z.rewards = {0, 10};
    Rng rng(2);
    const auto c = drdf::sample_bandit(z, 2, rng);
    ASSERT_EQ(c.size(), 10u);
    for (const auto& cand : c) {
        EXPECT_EQ(cand.zone, 1u);
        EXPECT_GE(cand.point.minCoeff(), 0.5);
    }
}

TEST(SampleBandit, Deterministic) {
    const auto z = ZoneState::make({0.0, 1.0}, 3, 4);
    Rng a(9), b(9);
    const auto ca = drdf::sample_bandit(z, 5, a);
    const auto cb = drdf::sample_bandit(z, 5, b);
    ASSERT_EQ(ca.size(), cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) EXPECT_EQ(ca[i].point, cb[i].point);
}

TEST(UpdateRewards, TransferOneUnit) {
    const auto z = ZoneState::make({0.0, 1.0}, 4, 5);
    EXPECT_EQ(drdf::update_rewards(z, 1, 0).rewards, (std::vector<int>{4, 6, 5, 5}));
}

TEST(UpdateRewards, SameZoneUnchanged) {
    const auto z = ZoneState::make({0.0, 1.0}, 4, 5);
    EXPECT_EQ(drdf::update_rewards(z, 2, 2).rewards, z.rewards);
}

TEST(UpdateRewards, EmptyLoserUnchanged) {
    auto z = ZoneState::make({0.0, 1.0}, 2, 5);
    z.rewards = {0, 10};
    EXPECT_EQ(drdf::update_rewards(z, 1, 0).rewards, (std::vector<int>{0, 10}));
}

TEST(UpdateRewards, ConservationUnderRandomUpdates) {
    auto z = ZoneState::make({0.0, 1.0}, 7, 3);
    std::mt19937_64 gen(4);
    std::uniform_int_distribution<std::size_t> pick(0, 6);
    for (int i = 0; i < 5000; ++i) {
        z = drdf::update_rewards(z, pick(gen), pick(gen));
        ASSERT_EQ(z.total_reward(), 21);
        ASSERT_GE(*std::min_element(z.rewards.begin(), z.rewards.end()), 0);
    }
}

TEST(SampleRandom, BoundsAndCount) {
    auto s = RandomSearchState::make({0.0, 1.0}, 30);
    s.lower = 0.4;
    s.upper = 0.4 + 1e-9;
    Rng rng(3);
    const auto pts = drdf::sample_random(s, 4, rng);
    ASSERT_EQ(pts.size(), 30u);
    for (const auto& p : pts) {
        EXPECT_GE(p.minCoeff(), s.lower);
        EXPECT_LE(p.maxCoeff(), s.upper);
    }
}

TEST(SampleRandom, EmptyWhenNoPoints) {
    const auto s = RandomSearchState::make({0.0, 1.0}, 0);
    Rng rng(3);
    EXPECT_TRUE(drdf::sample_random(s, 4, rng).empty());
}

TEST(SampleRandom, Deterministic) {
    const auto s = RandomSearchState::make({-1.0, 2.0}, 10);
    Rng a(12), b(12);
    EXPECT_EQ(drdf::sample_random(s, 3, a), drdf::sample_random(s, 3, b));
}

TEST(SelectWinner, Branches) {
    const Vector m = Vector::Constant(2, 0.1);
    const Vector r = Vector::Constant(2, 0.9);
    auto w = drdf::select_winner(m, 1.0, r, 2.0);
    EXPECT_TRUE(w.bandit_won);
    EXPECT_EQ(w.point, m);
    w = drdf::select_winner(m, 2.0, r, 1.0);
    EXPECT_FALSE(w.bandit_won);
    EXPECT_EQ(w.point, r);
    w = drdf::select_winner(m, 1.5, r, 1.5);
    EXPECT_FALSE(w.bandit_won);
    EXPECT_EQ(w.point, r);
}

TEST(ShrinkBounds, AppliesOnBanditWin) {
    const auto s = RandomSearchState::make({0.0, 1.0}, 5, 0.05, 0.05);
    const auto t = drdf::shrink_bounds(s, true);
    EXPECT_DOUBLE_EQ(t.lower, 0.05);
    EXPECT_DOUBLE_EQ(t.upper, 0.95);
}

TEST(ShrinkBounds, UnchangedOnLoss) {
    const auto s = RandomSearchState::make({0.0, 1.0}, 5, 0.05, 0.05);
    const auto t = drdf::shrink_bounds(s, false);
    EXPECT_EQ(t.lower, 0.0);
    EXPECT_EQ(t.upper, 1.0);
}

TEST(ShrinkBounds, GuardRefusesCrossing) {
    auto s = RandomSearchState::make({0.0, 1.0}, 5, 0.05, 0.05);
    s.lower = 0.48;
    s.upper = 0.52;
    const auto t = drdf::shrink_bounds(s, true);
    EXPECT_EQ(t.lower, 0.48);
    EXPECT_EQ(t.upper, 0.52);
}

TEST(ShrinkBounds, AdaptiveMovesFartherSide) {
    const auto s = RandomSearchState::make({0.0, 1.0}, 5, 0.1, 0.1, drdf::ShrinkMode::adaptive);
    const auto near_lower = drdf::shrink_bounds(s, true, Vector::Constant(3, 0.1));
    EXPECT_EQ(near_lower.lower, 0.0);
    EXPECT_DOUBLE_EQ(near_lower.upper, 0.9);
    const auto near_upper = drdf::shrink_bounds(s, true, Vector::Constant(3, 0.8));
    EXPECT_DOUBLE_EQ(near_upper.lower, 0.1);
    EXPECT_EQ(near_upper.upper, 1.0);
}

TEST(ShrinkBounds, OrderingHoldsUnderRandomWins) {
    auto s = RandomSearchState::make({0.0, 1.0}, 5, 0.013, 0.021);
    std::mt19937_64 gen(8);
    std::bernoulli_distribution win(0.6);
    for (int i = 0; i < 5000; ++i) {
        s = drdf::shrink_bounds(s, win(gen));
        ASSERT_TRUE(s.valid());
    }
    EXPECT_LT(s.upper - s.lower, 0.05);
}

}  // namespace
