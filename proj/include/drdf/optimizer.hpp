#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "drdf/acquisition.hpp"
#include "drdf/config.hpp"
#include "drdf/dimension.hpp"
#include "drdf/epidemic.hpp"
#include "drdf/error.hpp"
#include "drdf/gp_surrogate.hpp"
#include "drdf/local_search.hpp"
#include "drdf/random.hpp"
#include "drdf/sampling.hpp"

namespace drdf {

struct TraceEntry {
    int iteration = 0;
    Vector point;
    double objective = 0.0;  ///< reduced objective of the chosen point
    bool bandit_won = false;
    std::vector<int> rewards;
    double lower = 0.0;  ///< random-search bounds after this iteration's update
    double upper = 0.0;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct RunReport {
    std::string method;  ///< "drdf" or "standard_bo"
    Vector best_reduced;
    Vector best_full;
    double best_objective_full = 0.0;
    double best_objective_reduced = 0.0;
    std::vector<double> initial_objectives;
    std::vector<TraceEntry> trace;
    double wall_time = 0.0;
    KeyValues config;        ///< every effective setting
    std::string config_source;  ///< the config file text as given, if any
    std::uint64_t seed = 0;

    /// Equality on everything except the wall-clock time.
    [[nodiscard]] bool same_result(const RunReport& o) const {
        return method == o.method && best_reduced == o.best_reduced && best_full == o.best_full &&
               best_objective_full == o.best_objective_full &&
               best_objective_reduced == o.best_objective_reduced &&
               initial_objectives == o.initial_objectives && trace == o.trace && config == o.config &&
               config_source == o.config_source && seed == o.seed;
    }
    friend bool operator==(const RunReport& a, const RunReport& b) {
        return a.same_result(b) && a.wall_time == b.wall_time;
    }
};

namespace detail {

// Substream tags. Each consumer gets a stream that depends only on the seed
// and its own tag, never on how many draws other stages made.
enum StreamTag : std::uint64_t { kInitDesign = 1, kIteration, kObjectiveNoise, kAdamNoise, kFillIn, kFinalNoise, kDedup };

struct LoopOptions {
    bool bandit = true;
    bool local_search = true;
    bool shrink = true;
};

inline Vector to_unit(const Vector& u, const Bounds& b) { return (u.array() - b.lower) / b.width(); }

/// Observations are standardized before fitting so the unit-variance kernel
/// and the LCB weight act on a common scale.
inline GpModel fit_standardized(const std::vector<Vector>& unit_points, const std::vector<double>& ys,
                                double prior_mean, const KernelParams& kernel) {
    double mean = 0.0;
    for (double y : ys) mean += y;
    mean /= static_cast<double>(ys.size());
    double var = 0.0;
    for (double y : ys) var += (y - mean) * (y - mean);
    double sd = std::sqrt(var / static_cast<double>(ys.size()));
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) sd = 1.0;
    std::vector<double> z(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) z[i] = (ys[i] - mean) / sd;
    return fit(unit_points, std::move(z), prior_mean, kernel);
}

/// Moves `u` off an existing training point by a tiny offset so the kernel
/// matrix stays factorable. One random draw per call.
inline Vector separate_from(const Vector& u, const std::vector<Vector>& points, const Bounds& b, Rng& rng) {
    bool duplicate = false;
    for (const auto& p : points) {
        if ((p - u).cwiseAbs().maxCoeff() <= 1e-9) {
            duplicate = true;
            break;
        }
    }
    if (!duplicate) return u;
    const double delta = 1e-6 * b.width() * rng.uniform(0.5, 1.0);
    Vector out = u;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out(i) = out(i) + delta <= b.upper ? out(i) + delta : out(i) - delta;
    }
    return out;
}

inline RunReport run_loop(const OptimizerConfig& config, const LoopOptions& opts, const char* method) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();
    const auto& inst = config.instance;
    const Bounds bounds = inst.objective.bounds;
    const ReductionSchedule schedule = make_schedule(inst.objective.t_f, config.d);
    const Eigen::Index d = config.d;
    const bool noisy = inst.kind == ModelKind::sis;
    const Rng root(config.seed);

    auto evaluate = [&](const Vector& u, Rng stream) {
        const double y = evaluate_reduced(inst, u, schedule, noisy ? &stream : nullptr);
        if (!std::isfinite(y)) throw EvaluationFailure("objective evaluation failed at a candidate point");
        return y;
    };
    auto evaluate_or_abort = [&](const Vector& u, Rng stream, int iteration) {
        try {
            return evaluate(u, stream);
        } catch (const std::exception& e) {
            std::string where;
            for (Eigen::Index i = 0; i < u.size(); ++i) where += (i ? "," : "") + format_double(u(i));
            throw EvaluationFailure("iteration " + std::to_string(iteration) + ": " + e.what() + " at point (" +
                                    where + ")");
        }
    };

    RunReport report;
    report.method = method;
    report.seed = config.seed;
    report.config = to_key_values(config);

    std::vector<Vector> points;       // in control units
    std::vector<Vector> unit_points;  // mapped to [0,1]^d for the kernel
    std::vector<double> ys;
    points.reserve(static_cast<std::size_t>(config.n_init + config.iterations));

    Rng init_rng = root.substream({kInitDesign});
    for (int i = 0; i < config.n_init; ++i) {
        Vector u(d);
        for (Eigen::Index j = 0; j < d; ++j) u(j) = init_rng.uniform(bounds.lower, bounds.upper);
        const double y = evaluate_or_abort(u, root.substream({kObjectiveNoise, 0, static_cast<std::uint64_t>(i)}), 0);
        points.push_back(u);
        unit_points.push_back(to_unit(u, bounds));
        ys.push_back(y);
        report.initial_objectives.push_back(y);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < ys.size(); ++i) {
        if (ys[i] < ys[best]) best = i;
    }

    ZoneState zones = ZoneState::make(bounds, static_cast<std::size_t>(config.n_zones), config.m_points);
    RandomSearchState search = RandomSearchState::make(
        bounds, static_cast<std::size_t>(opts.bandit ? config.n_random : config.n_random + config.n_zones * config.m_points),
        config.shrink_lower, config.shrink_upper, config.shrink_mode);

    for (int it = 1; it <= config.iterations; ++it) {
        const GpModel model = fit_standardized(unit_points, ys, config.prior_mean, config.kernel);
        Rng it_rng = root.substream({kIteration, static_cast<std::uint64_t>(it)});

        std::vector<Candidate> candidates;
        if (opts.bandit) candidates = sample_bandit(zones, d, it_rng);
        const std::size_t n_bandit = candidates.size();
        for (auto& p : sample_random(search, d, it_rng)) {
            candidates.push_back({std::move(p), 0.0, Origin::random, 0});
        }
        if (candidates.empty()) throw InvalidArgument("optimizer: no candidates generated");

        std::vector<Vector> queries;
        queries.reserve(candidates.size());
        for (const auto& c : candidates) queries.push_back(to_unit(c.point, bounds));
        const auto post = model.posterior_batch(queries);
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            candidates[i].acq_value = lcb(post[i].mean, post[i].variance, config.acquisition);
        }

        // argmin/argmax with ties going to the earliest candidate
        auto scan = [&](std::size_t from, std::size_t to, std::size_t& lo, std::size_t& hi) {
            lo = hi = from;
            for (std::size_t i = from + 1; i < to; ++i) {
                if (candidates[i].acq_value < candidates[lo].acq_value) lo = i;
                if (candidates[i].acq_value > candidates[hi].acq_value) hi = i;
            }
        };
        Winner winner;
        if (n_bandit == 0) {
            std::size_t lo = 0, hi = 0;
            scan(0, candidates.size(), lo, hi);
            winner = {candidates[lo].point, false};
        } else if (n_bandit == candidates.size()) {
            std::size_t lo = 0, hi = 0;
            scan(0, n_bandit, lo, hi);
            winner = {candidates[lo].point, true};
            zones = update_rewards(zones, candidates[lo].zone, candidates[hi].zone);
        } else {
            std::size_t b_lo = 0, b_hi = 0, r_lo = 0, r_hi = 0;
            scan(0, n_bandit, b_lo, b_hi);
            scan(n_bandit, candidates.size(), r_lo, r_hi);
            winner = select_winner(candidates[b_lo].point, candidates[b_lo].acq_value, candidates[r_lo].point,
                                   candidates[r_lo].acq_value);
            zones = update_rewards(zones, candidates[b_lo].zone, candidates[b_hi].zone);
            if (opts.shrink) search = shrink_bounds(search, winner.bandit_won, candidates[b_lo].point);
        }

        Rng dedup_rng = root.substream({kDedup, static_cast<std::uint64_t>(it)});
        const Vector chosen = separate_from(winner.point, points, bounds, dedup_rng);
        const double y =
            evaluate_or_abort(chosen, root.substream({kObjectiveNoise, 1, static_cast<std::uint64_t>(it)}), it);

        points.push_back(chosen);
        unit_points.push_back(to_unit(chosen, bounds));
        ys.push_back(y);
        if (y < ys[best]) best = ys.size() - 1;

        report.trace.push_back({it, chosen, y, winner.bandit_won, zones.rewards, search.lower, search.upper});
    }

    Vector best_reduced = points[best];
    double best_reduced_value = ys[best];
    if (opts.local_search && config.adam.steps > 0) {
        const Objective objective = [&](const Vector& u) {
            Rng stream = root.substream({kAdamNoise});
            return evaluate_reduced(inst, u, schedule, noisy ? &stream : nullptr);
        };
        const AdamResult refined = adam_search(objective, best_reduced, config.adam, bounds);
        best_reduced = refined.best;
        best_reduced_value = refined.best_value;
    }

    Rng fill_rng = root.substream({kFillIn});
    const ControlStrategy full =
        fill(ControlStrategy::reduce(best_reduced, bounds, schedule), config.fill, fill_rng);
    Rng final_noise = root.substream({kFinalNoise});
    report.best_reduced = best_reduced;
    report.best_full = full.values;
    report.best_objective_reduced = best_reduced_value;
    report.best_objective_full = evaluate_full(inst, full.values, noisy ? &final_noise : nullptr);
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace detail

/// Full algorithm: bandit + random-search candidates scored by LCB on a GP
/// over the reduced strategy, followed by Adam refinement and fill-in.
inline RunReport run(const OptimizerConfig& config) { return detail::run_loop(config, {}, "drdf"); }

/// Comparison arm without dimension reduction, bandit sampling, bound
/// shrinking or local search: random candidates over the whole box, with the
/// bandit's candidate budget handed to the random sampler.
inline RunReport run_baseline_standard_bo(OptimizerConfig config) {
    config.d = config.instance.objective.t_f;
    return detail::run_loop(config, {false, false, false}, "standard_bo");
}

/// Objective of `full_control` under the stream the optimizer uses for its
/// final evaluation, so reports can be re-checked independently.
inline double final_objective(const OptimizerConfig& config, const Vector& full_control) {
    Rng final_noise = Rng(config.seed).substream({detail::kFinalNoise});
    return evaluate_full(config.instance, full_control,
                         config.instance.kind == ModelKind::sis ? &final_noise : nullptr);
}

}  // namespace drdf
