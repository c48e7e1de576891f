#include <random>

#include <gtest/gtest.h>

#include "drdf/acquisition.hpp"

namespace {

TEST(Lcb, Arithmetic) { EXPECT_EQ(drdf::lcb(5.0, 4.0, {1.0}), 3.0); }

TEST(Lcb, ZeroWeightIsMean) {
    for (double m : {-3.0, 0.0, 12.5}) EXPECT_EQ(drdf::lcb(m, 9.0, {0.0}), m);
}

TEST(Lcb, ZeroVarianceIsMean) {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 100; ++i) {
        const double m = u(gen);
        EXPECT_EQ(drdf::lcb(m, 0.0, {std::abs(u(gen))}), m);
    }
}

TEST(Lcb, StrictlyDecreasingInVariance) {
    double prev = drdf::lcb(1.0, 0.0, {2.0});
    for (double v : {1.0, 4.0, 9.0}) {
        const double cur = drdf::lcb(1.0, v, {2.0});
        EXPECT_LT(cur, prev);
        prev = cur;
    }
}

TEST(Lcb, StrictlyIncreasingInMean) { EXPECT_LT(drdf::lcb(1.0, 2.0, {2.0}), drdf::lcb(1.5, 2.0, {2.0})); }

TEST(Lcb, NegativeVarianceThrows) { EXPECT_THROW(drdf::lcb(0.0, -1e-3, {1.0}), drdf::InvalidArgument); }

}  // namespace
