#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drdf/error.hpp"
#include "drdf/gp_surrogate.hpp"
#include "drdf/random.hpp"
#include "drdf/sampling.hpp"

namespace drdf {

/// Evenly spaced subset of the 1-based epochs 1..t_f: {1, phi+1, ..., (d-1)phi+1}
/// with phi = floor(t_f / d). When d does not divide t_f a trailing run of
/// epochs after the last scheduled one is left for the fill-in to cover.
struct ReductionSchedule {
    int t_f = 0;
    int d = 0;
    int phi = 0;
    std::vector<int> epochs;

    [[nodiscard]] int last_epoch() const { return epochs.back(); }

    /// Number of full-horizon epochs represented by reduced index k
    /// (phi for all but the last, which also absorbs the trailing run).
    [[nodiscard]] int weight(int k) const { return k + 1 < d ? phi : t_f - epochs[k] + 1; }
};

inline ReductionSchedule make_schedule(int t_f, int d) {
    if (t_f < 1) throw InvalidArgument("make_schedule: t_f must be positive");
    if (d < 1 || d > t_f) {
        throw InvalidArgument("make_schedule: need 1 <= d <= t_f, got d = " + std::to_string(d) +
                              ", t_f = " + std::to_string(t_f));
    }
    ReductionSchedule s;
    s.t_f = t_f;
    s.d = d;
    s.phi = t_f / d;
    s.epochs.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) s.epochs[static_cast<std::size_t>(k)] = k * s.phi + 1;
    return s;
}

/// Control values over time. A reduced strategy carries the schedule that
/// says which epochs its values belong to; a full strategy has one value
/// per epoch and no schedule.
struct ControlStrategy {
    Vector values;
    Bounds bounds;
    std::optional<ReductionSchedule> schedule;

    [[nodiscard]] bool reduced() const { return schedule.has_value(); }

    static ControlStrategy full(Vector values, Bounds bounds) { return {std::move(values), bounds, std::nullopt}; }
    static ControlStrategy reduce(Vector values, Bounds bounds, ReductionSchedule schedule) {
        return {std::move(values), bounds, std::move(schedule)};
    }
};

enum class FillStrategy { identical, uniform, linear, normal, gp };

inline constexpr FillStrategy kAllFillStrategies[] = {FillStrategy::identical, FillStrategy::uniform,
                                                      FillStrategy::linear, FillStrategy::normal,
                                                      FillStrategy::gp};

inline std::string_view to_string(FillStrategy f) {
    switch (f) {
        case FillStrategy::identical: return "identical";
        case FillStrategy::uniform: return "uniform";
        case FillStrategy::linear: return "linear";
        case FillStrategy::normal: return "normal";
        case FillStrategy::gp: return "gp";
    }
    return "?";
}

inline FillStrategy parse_fill_strategy(std::string_view name) {
    for (auto f : kAllFillStrategies) {
        if (to_string(f) == name) return f;
    }
    throw InvalidArgument("unknown fill strategy '" + std::string(name) + "'");
}

namespace detail {

inline const ReductionSchedule& checked_schedule(const ControlStrategy& reduced) {
    if (!reduced.schedule) throw InvalidArgument("fill: strategy is not reduced");
    const auto& s = *reduced.schedule;
    if (reduced.values.size() != s.d) {
        throw InvalidArgument("fill: reduced strategy has " + std::to_string(reduced.values.size()) +
                              " values, schedule expects " + std::to_string(s.d));
    }
    return s;
}

/// Visits every non-scheduled epoch as (t, A-value, B-value, m) where m is
/// the 1-based position inside its segment (m >= 2). The trailing run uses
/// the last reduced value for both endpoints.
template <typename Visit>
void for_each_interior(const ReductionSchedule& s, const Vector& values, Visit&& visit) {
    for (int k = 0; k < s.d; ++k) {
        const int a = s.epochs[static_cast<std::size_t>(k)];
        const bool last = k + 1 == s.d;
        const int end = last ? s.t_f + 1 : s.epochs[static_cast<std::size_t>(k + 1)];
        const double ua = values(k);
        const double ub = last ? ua : values(k + 1);
        for (int t = a + 1; t < end; ++t) visit(t, ua, ub, t - a + 1, last);
    }
}

inline Vector scatter_schedule(const ReductionSchedule& s, const Vector& values) {
    Vector full = Vector::Zero(s.t_f);
    for (int k = 0; k < s.d; ++k) full(s.epochs[static_cast<std::size_t>(k)] - 1) = values(k);
    return full;
}

inline double clamp(double x, const Bounds& b) { return std::clamp(x, b.lower, b.upper); }

}  // namespace detail

inline ControlStrategy fill_identical(const ControlStrategy& reduced) {
    const auto& s = detail::checked_schedule(reduced);
    Vector full = detail::scatter_schedule(s, reduced.values);
    detail::for_each_interior(s, reduced.values, [&](int t, double ua, double, int, bool) { full(t - 1) = ua; });
    return ControlStrategy::full(std::move(full), reduced.bounds);
}

inline ControlStrategy fill_linear(const ControlStrategy& reduced) {
    const auto& s = detail::checked_schedule(reduced);
    Vector full = detail::scatter_schedule(s, reduced.values);
    const double phi = s.phi;
    detail::for_each_interior(s, reduced.values, [&](int t, double ua, double ub, int m, bool last) {
        full(t - 1) = last ? ua : ua + (m - 1) * (ub - ua) / phi;
    });
    return ControlStrategy::full(std::move(full), reduced.bounds);
}

inline ControlStrategy fill_uniform(const ControlStrategy& reduced, Rng& rng) {
    const auto& s = detail::checked_schedule(reduced);
    Vector full = detail::scatter_schedule(s, reduced.values);
    detail::for_each_interior(s, reduced.values, [&](int t, double ua, double ub, int, bool) {
        const double lo = std::min(ua, ub);
        const double hi = std::max(ua, ub);
        full(t - 1) = lo == hi ? lo : detail::clamp(rng.uniform(lo, hi), reduced.bounds);
    });
    return ControlStrategy::full(std::move(full), reduced.bounds);
}

/// Mean and population standard deviation of a segment's two endpoints.
struct SegmentMoments {
    double mean;
    double stddev;
};

inline SegmentMoments segment_moments(double ua, double ub) {
    return {0.5 * (ua + ub), 0.5 * std::abs(ua - ub)};
}

/// One unclamped draw from Normal(mean(ua, ub), std(ua, ub)).
inline double sample_segment_normal(double ua, double ub, Rng& rng) {
    const auto [mean, sd] = segment_moments(ua, ub);
    return rng.normal(mean, sd);
}

inline ControlStrategy fill_normal(const ControlStrategy& reduced, Rng& rng) {
    const auto& s = detail::checked_schedule(reduced);
    Vector full = detail::scatter_schedule(s, reduced.values);
    detail::for_each_interior(s, reduced.values, [&](int t, double ua, double ub, int, bool) {
        full(t - 1) = ua == ub ? ua : detail::clamp(sample_segment_normal(ua, ub, rng), reduced.bounds);
    });
    return ControlStrategy::full(std::move(full), reduced.bounds);
}

/// Regresses the reduced values on their epochs with a one-dimensional GP
/// and reads interior epochs off the posterior mean. Epoch times are divided
/// by phi so neighbouring knots sit one length scale apart; the prior mean is
/// the mean of the reduced values.
inline ControlStrategy fill_gp(const ControlStrategy& reduced) {
    const auto& s = detail::checked_schedule(reduced);
    Vector full = detail::scatter_schedule(s, reduced.values);
    if (s.d == s.t_f) return ControlStrategy::full(std::move(full), reduced.bounds);

    auto time_coord = [&](int t) {
        Vector x(1);
        x(0) = static_cast<double>(t - 1) / s.phi;
        return x;
    };
    std::vector<Vector> xs;
    std::vector<double> ys;
    for (int k = 0; k < s.d; ++k) {
        xs.push_back(time_coord(s.epochs[static_cast<std::size_t>(k)]));
        ys.push_back(reduced.values(k));
    }
    const double prior = reduced.values.mean();
    const GpModel model = fit(std::move(xs), std::move(ys), prior, KernelParams{1.0, 1e-8});
    detail::for_each_interior(s, reduced.values, [&](int t, double, double, int, bool) {
        full(t - 1) = detail::clamp(model.posterior(time_coord(t)).mean, reduced.bounds);
    });
    return ControlStrategy::full(std::move(full), reduced.bounds);
}

/// Dispatches on `strategy`; `rng` is consumed only by the stochastic fills.
inline ControlStrategy fill(const ControlStrategy& reduced, FillStrategy strategy, Rng& rng) {
    switch (strategy) {
        case FillStrategy::identical: return fill_identical(reduced);
        case FillStrategy::uniform: return fill_uniform(reduced, rng);
        case FillStrategy::linear: return fill_linear(reduced);
        case FillStrategy::normal: return fill_normal(reduced, rng);
        case FillStrategy::gp: return fill_gp(reduced);
    }
    throw InvalidArgument("fill: unknown strategy");
}

}  // namespace drdf
