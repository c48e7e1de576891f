#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "drdf/dimension.hpp"

namespace {

using drdf::Bounds;
using drdf::ControlStrategy;
using drdf::FillStrategy;
using drdf::Rng;
using drdf::Vector;

ControlStrategy reduced(std::initializer_list<double> vals, int t_f, Bounds b = {0.0, 1.0}) {
    Vector v(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (double x : vals) v(i++) = x;
    return ControlStrategy::reduce(v, b, drdf::make_schedule(t_f, static_cast<int>(vals.size())));
}

ControlStrategy random_reduced(std::mt19937_64& gen, int t_f, int d, Bounds b = {0.0, 1.0}) {
    std::uniform_real_distribution<double> u(b.lower, b.upper);
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = u(gen);
    return ControlStrategy::reduce(v, b, drdf::make_schedule(t_f, d));
}

TEST(Schedule, EvenSpacing) {
    const auto s = drdf::make_schedule(100, 20);
    EXPECT_EQ(s.phi, 5);
    ASSERT_EQ(s.epochs.size(), 20u);
    for (int k = 0; k < 20; ++k) EXPECT_EQ(s.epochs[static_cast<std::size_t>(k)], 5 * k + 1);
    EXPECT_EQ(s.epochs.back(), 96);
}

TEST(Schedule, Identity) {
    const auto s = drdf::make_schedule(100, 100);
    EXPECT_EQ(s.phi, 1);
    for (int k = 0; k < 100; ++k) EXPECT_EQ(s.epochs[static_cast<std::size_t>(k)], k + 1);
}

TEST(Schedule, NonDivisibleHorizon) {
    const auto s = drdf::make_schedule(100, 30);
    EXPECT_EQ(s.phi, 3);
    EXPECT_EQ(s.epochs.front(), 1);
    EXPECT_EQ(s.epochs[1], 4);
    EXPECT_EQ(s.epochs.back(), 88);
    int total = 0;
    for (int k = 0; k < s.d; ++k) total += s.weight(k);
    EXPECT_EQ(total, 100);
    EXPECT_EQ(s.weight(29), 13);
}

TEST(Schedule, RejectsOutOfRange) {
    EXPECT_THROW(drdf::make_schedule(10, 0), drdf::InvalidArgument);
    EXPECT_THROW(drdf::make_schedule(10, 11), drdf::InvalidArgument);
}

TEST(FillIdentical, HoldsSegmentStart) {
    const auto full = drdf::fill_identical(reduced({0.3, 0.7}, 4));
    ASSERT_EQ(full.values.size(), 4);
    EXPECT_EQ(full.values, (Vector(4) << 0.3, 0.3, 0.7, 0.7).finished());
    EXPECT_FALSE(full.reduced());
}

TEST(FillIdentical, ConstantStaysConstant) {
    const auto full = drdf::fill_identical(reduced({0.4, 0.4, 0.4}, 10));
    EXPECT_TRUE((full.values.array() == 0.4).all());
}

TEST(FillLinear, InteriorValues) {
    const auto full = drdf::fill_linear(reduced({0.0, 1.0}, 10));  // phi = 5
    const double expected[] = {0.0, 0.2, 0.4, 0.6, 0.8};
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(full.values(i), expected[i], 1e-15);
    EXPECT_EQ(full.values(5), 1.0);
    // trailing run holds the last value
    for (int i = 6; i < 10; ++i) EXPECT_EQ(full.values(i), 1.0);
}

TEST(FillLinear, FlatSegment) {
    const auto full = drdf::fill_linear(reduced({0.25, 0.25}, 8));
    EXPECT_TRUE((full.values.array() == 0.25).all());
}

TEST(FillLinear, ExactOnAffineInputs) {
    // u(t) = 0.1 + 0.008 (t - 1), sampled at the schedule epochs
    for (int d : {5, 20, 25, 50}) {
        const auto s = drdf::make_schedule(100, d);
        Vector v(d);
        for (int k = 0; k < d; ++k) v(k) = 0.1 + 0.008 * (s.epochs[static_cast<std::size_t>(k)] - 1);
        const auto full = drdf::fill_linear(ControlStrategy::reduce(v, {0.0, 1.0}, s));
        for (int t = 1; t <= s.last_epoch(); ++t) EXPECT_NEAR(full.values(t - 1), 0.1 + 0.008 * (t - 1), 1e-12);
    }
}

TEST(FillUniform, WithinEndpointRange) {
    Rng rng(4);
    const auto full = drdf::fill_uniform(reduced({0.2, 0.6, 0.6}, 30), rng);
    for (int t = 2; t <= 10; ++t) {
        EXPECT_GE(full.values(t - 1), 0.2);
        EXPECT_LE(full.values(t - 1), 0.6);
    }
    for (int t = 12; t <= 30; ++t) EXPECT_EQ(full.values(t - 1), 0.6);
}

TEST(FillUniform, Deterministic) {
    Rng a(5), b(5);
    const auto r = reduced({0.1, 0.9, 0.3}, 21);
    EXPECT_EQ(drdf::fill_uniform(r, a).values, drdf::fill_uniform(r, b).values);
}

TEST(FillNormal, DegenerateSegment) {
    Rng rng(6);
    const auto full = drdf::fill_normal(reduced({0.35, 0.35}, 12), rng);
    EXPECT_TRUE((full.values.array() == 0.35).all());
}

TEST(FillNormal, SegmentMomentsPopulationConvention) {
    const auto m = drdf::segment_moments(0.0, 1.0);
    EXPECT_EQ(m.mean, 0.5);
    EXPECT_EQ(m.stddev, 0.5);
}

TEST(FillNormal, SampleMeanBeforeClamping) {
    Rng rng(7);
    double sum = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) sum += drdf::sample_segment_normal(0.0, 1.0, rng);
    EXPECT_NEAR(sum / n, 0.5, 0.02);
}

TEST(FillNormal, ClampedToBounds) {
    Rng rng(8);
    const auto full = drdf::fill_normal(reduced({0.0, 1.0, 0.0, 1.0}, 80), rng);
    EXPECT_GE(full.values.minCoeff(), 0.0);
    EXPECT_LE(full.values.maxCoeff(), 1.0);
}

TEST(FillGp, IdentityWhenFullDimension) {
    std::mt19937_64 gen(9);
    const auto r = random_reduced(gen, 12, 12);
    EXPECT_LE((drdf::fill_gp(r).values - r.values).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(FillGp, ConstantInputGivesConstantOutput) {
    const auto full = drdf::fill_gp(reduced({0.6, 0.6, 0.6, 0.6, 0.6}, 50));
    EXPECT_LE((full.values.array() - 0.6).abs().maxCoeff(), 1e-6);
}

TEST(FillGp, MonotoneInputStaysInBounds) {
    const auto full = drdf::fill_gp(reduced({0.0, 0.05, 0.3, 0.9, 1.0}, 53));
    EXPECT_GE(full.values.minCoeff(), 0.0);
    EXPECT_LE(full.values.maxCoeff(), 1.0);
}

TEST(Fill, AllStrategiesCoincideAtFullDimension) {
    std::mt19937_64 gen(10);
    const auto r = random_reduced(gen, 15, 15);
    for (auto f : drdf::kAllFillStrategies) {
        Rng rng(1);
        EXPECT_EQ(drdf::fill(r, f, rng).values, r.values) << drdf::to_string(f);
    }
}

TEST(Fill, ContractsOnRandomInputs) {
    std::mt19937_64 gen(11);
    const Bounds b{-0.5, 2.0};
    for (auto f : drdf::kAllFillStrategies) {
        for (int d : {5, 20, 30, 40}) {
            for (int trial = 0; trial < 10; ++trial) {
                const auto r = random_reduced(gen, 100, d, b);
                Rng rng(static_cast<std::uint64_t>(trial));
                const auto full = drdf::fill(r, f, rng);
                ASSERT_EQ(full.values.size(), 100);
                EXPECT_GE(full.values.minCoeff(), b.lower);
                EXPECT_LE(full.values.maxCoeff(), b.upper);
                const double tol = f == FillStrategy::gp ? 1e-6 : 0.0;
                for (int k = 0; k < d; ++k) {
                    EXPECT_NEAR(full.values(r.schedule->epochs[static_cast<std::size_t>(k)] - 1), r.values(k), tol);
                }
            }
        }
    }
}

TEST(Fill, ParseStrategyNames) {
    for (auto f : drdf::kAllFillStrategies) EXPECT_EQ(drdf::parse_fill_strategy(drdf::to_string(f)), f);
    EXPECT_THROW(drdf::parse_fill_strategy("cubic"), drdf::InvalidArgument);
}

TEST(Fill, RejectsMismatchedLength) {
    auto r = reduced({0.1, 0.2}, 10);
    r.values = Vector::Zero(3);
    EXPECT_THROW(drdf::fill_identical(r), drdf::InvalidArgument);
}

}  // namespace
