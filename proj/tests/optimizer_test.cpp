#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "drdf/optimizer.hpp"

namespace {

using drdf::OptimizerConfig;
using drdf::Vector;

OptimizerConfig toy_config() {
    OptimizerConfig c;
    c.instance = drdf::default_seir_instance();
    c.instance.objective.t_f = 10;
    c.d = 10;
    c.iterations = 30;
    c.adam.steps = 20;
    c.seed = 3;
    return c;
}

TEST(Optimizer, BestNotWorseThanInitialDesign) {
    const auto r = drdf::run(toy_config());
    const double best_init = *std::min_element(r.initial_objectives.begin(), r.initial_objectives.end());
    EXPECT_LE(r.best_objective_full, best_init);
}

TEST(Optimizer, DeterministicGivenSeed) {
    const auto a = drdf::run(toy_config());
    const auto b = drdf::run(toy_config());
    EXPECT_TRUE(a.same_result(b));
    auto other = toy_config();
    other.seed = 4;
    EXPECT_FALSE(drdf::run(other).same_result(a));
}

TEST(Optimizer, TraceInvariants) {
    auto c = toy_config();
    c.shrink_lower = 0.02;
    c.shrink_upper = 0.03;
    const auto r = drdf::run(c);
    ASSERT_EQ(r.trace.size(), static_cast<std::size_t>(c.iterations));
    EXPECT_EQ(r.initial_objectives.size(), static_cast<std::size_t>(c.n_init));
    const double lo = c.instance.objective.bounds.lower, hi = c.instance.objective.bounds.upper;
    double running = *std::min_element(r.initial_objectives.begin(), r.initial_objectives.end());
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        const auto& t = r.trace[i];
        EXPECT_EQ(t.iteration, static_cast<int>(i + 1));
        EXPECT_EQ(std::accumulate(t.rewards.begin(), t.rewards.end(), 0), c.n_zones * c.m_points);
        EXPECT_TRUE(lo <= t.lower && t.lower < t.upper && t.upper <= hi);
        EXPECT_GE(t.point.minCoeff(), lo);
        EXPECT_LE(t.point.maxCoeff(), hi);
        const double next = std::min(running, t.objective);
        EXPECT_LE(next, running);
        running = next;
    }
    EXPECT_LE(r.best_objective_reduced, running);
}

TEST(Optimizer, FinalConsistency) {
    OptimizerConfig c;
    c.iterations = 15;
    c.adam.steps = 10;
    c.d = 20;
    for (auto f : {drdf::FillStrategy::identical, drdf::FillStrategy::linear, drdf::FillStrategy::uniform,
                   drdf::FillStrategy::normal}) {
        c.fill = f;
        const auto r = drdf::run(c);
        const auto s = drdf::make_schedule(100, 20);
        ASSERT_EQ(r.best_full.size(), 100);
        for (int k = 0; k < 20; ++k) EXPECT_EQ(r.best_full(s.epochs[static_cast<std::size_t>(k)] - 1), r.best_reduced(k));
        EXPECT_EQ(r.best_objective_full, drdf::final_objective(c, r.best_full));
    }
}

TEST(Optimizer, BeatsNoControlOnDefaultSeir) {
    OptimizerConfig c;
    c.d = 40;
    c.fill = drdf::FillStrategy::linear;
    c.seed = 1;
    const auto r = drdf::run(c);
    const double uncontrolled = drdf::evaluate_full(c.instance, Vector::Zero(100));
    EXPECT_LT(r.best_objective_full, uncontrolled);
}

TEST(Optimizer, SisRunIsReproducible) {
    OptimizerConfig c;
    c.instance = drdf::default_sis_instance();
    c.d = 20;
    c.iterations = 15;
    c.adam.steps = 5;
    const auto a = drdf::run(c);
    const auto b = drdf::run(c);
    EXPECT_TRUE(a.same_result(b));
    EXPECT_EQ(a.best_full.size(), 200);
}

TEST(Optimizer, RejectsInvalidConfig) {
    auto c = toy_config();
    c.d = 11;
    EXPECT_THROW(drdf::run(c), drdf::InvalidArgument);
    c = toy_config();
    c.n_init = 1;
    EXPECT_THROW(drdf::run(c), drdf::InvalidArgument);
    c = toy_config();
    c.iterations = 0;
    EXPECT_THROW(drdf::run(c), drdf::InvalidArgument);
}

TEST(Baseline, NoBanditNoReductionReproducible) {
    auto c = toy_config();
    c.instance.objective.t_f = 30;
    c.d = 5;
    const auto a = drdf::run_baseline_standard_bo(c);
    const auto b = drdf::run_baseline_standard_bo(c);
    EXPECT_TRUE(a.same_result(b));
    EXPECT_EQ(a.method, "standard_bo");
    EXPECT_EQ(a.best_reduced.size(), 30);
    EXPECT_EQ(a.best_full, a.best_reduced);
    const std::vector<int> initial(static_cast<std::size_t>(c.n_zones), c.m_points);
    for (const auto& t : a.trace) {
        EXPECT_FALSE(t.bandit_won);
        EXPECT_EQ(t.rewards, initial);
        EXPECT_EQ(t.lower, 0.0);
        EXPECT_EQ(t.upper, 1.0);
    }
    // no local search: the reported reduced value is the best evaluated one
    double best = *std::min_element(a.initial_objectives.begin(), a.initial_objectives.end());
    for (const auto& t : a.trace) best = std::min(best, t.objective);
    EXPECT_EQ(a.best_objective_reduced, best);
}

TEST(Separation, PerturbsDuplicates) {
    drdf::Rng rng(1);
    const Vector p = Vector::Constant(3, 1.0);
    const Vector q = drdf::detail::separate_from(p, {p}, {0.0, 1.0}, rng);
    EXPECT_GT((q - p).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE(q.maxCoeff(), 1.0);
    const Vector r = Vector::Constant(3, 0.2);
    EXPECT_EQ(drdf::detail::separate_from(r, {p}, {0.0, 1.0}, rng), r);
}

}  // namespace
