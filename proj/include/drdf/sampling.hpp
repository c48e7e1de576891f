#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "drdf/error.hpp"
#include "drdf/gp_surrogate.hpp"
#include "drdf/random.hpp"

namespace drdf {

struct Bounds {
    double lower = 0.0;
    double upper = 1.0;

    [[nodiscard]] double width() const { return upper - lower; }
    [[nodiscard]] bool contains(double x) const { return x >= lower && x <= upper; }

    void validate() const {
        if (!(lower < upper)) throw InvalidArgument("bounds: lower must be below upper");
    }
};

/// Even partition of the control range into bandit zones, each carrying an
/// integer reward that is also the number of points it is sampled with.
struct ZoneState {
    std::vector<double> zone_edges;
    std::vector<int> rewards;

    [[nodiscard]] std::size_t n_zones() const { return rewards.size(); }
    [[nodiscard]] long total_reward() const { return std::accumulate(rewards.begin(), rewards.end(), 0L); }

    static ZoneState make(Bounds bounds, std::size_t n_zones, int points_per_zone) {
        bounds.validate();
        if (n_zones == 0) throw InvalidArgument("zones: need at least one zone");
        if (points_per_zone < 0) throw InvalidArgument("zones: points per zone must be nonnegative");
        ZoneState z;
        z.zone_edges.resize(n_zones + 1);
        const double width = bounds.width() / static_cast<double>(n_zones);
        for (std::size_t i = 0; i < n_zones; ++i) {
            z.zone_edges[i] = bounds.lower + width * static_cast<double>(i);
        }
        z.zone_edges[n_zones] = bounds.upper;
        z.rewards.assign(n_zones, points_per_zone);
        return z;
    }
};

enum class ShrinkMode {
    fixed,     ///< shrink both sides by their configured amounts
    adaptive,  ///< shrink only the side farther from the bandit winner
};

/// Box [lower, upper] the random-search arm samples from, contracted while
/// the bandit arm keeps winning.
struct RandomSearchState {
    Bounds limits;  ///< the feasible range [u_l, u_u]
    double lower = 0.0;
    double upper = 1.0;
    double shrink_lower = 0.0;
    double shrink_upper = 0.0;
    std::size_t n_random = 50;
    ShrinkMode mode = ShrinkMode::fixed;

    static RandomSearchState make(Bounds limits, std::size_t n_random, double shrink_lower = 0.0,
                                  double shrink_upper = 0.0, ShrinkMode mode = ShrinkMode::fixed) {
        limits.validate();
        if (shrink_lower < 0.0 || shrink_upper < 0.0) {
            throw InvalidArgument("random search: shrink amounts must be nonnegative");
        }
        return {limits, limits.lower, limits.upper, shrink_lower, shrink_upper, n_random, mode};
    }

    [[nodiscard]] bool valid() const {
        return limits.lower <= lower && lower < upper && upper <= limits.upper;
    }
};

enum class Origin { bandit, random };

struct Candidate {
    Vector point;
    double acq_value = 0.0;
    Origin origin = Origin::random;
    /// Zone the point was drawn from; meaningful only for bandit candidates.
    std::size_t zone = 0;
};

/// For zone i, rewards[i] points whose coordinates are all drawn uniformly
/// from [edge_i, edge_{i+1}). Zone membership is therefore by construction.
inline std::vector<Candidate> sample_bandit(const ZoneState& zones, Eigen::Index d, Rng& rng) {
    if (d < 1) throw InvalidArgument("sample_bandit: d must be positive");
    std::vector<Candidate> out;
    out.reserve(static_cast<std::size_t>(zones.total_reward()));
    for (std::size_t i = 0; i < zones.n_zones(); ++i) {
        const double lo = zones.zone_edges[i];
        const double hi = zones.zone_edges[i + 1];
        for (int k = 0; k < zones.rewards[i]; ++k) {
            Candidate c;
            c.point.resize(d);
            for (Eigen::Index j = 0; j < d; ++j) c.point(j) = rng.uniform(lo, hi);
            c.origin = Origin::bandit;
            c.zone = i;
            out.push_back(std::move(c));
        }
    }
    return out;
}

/// Moves one unit of reward from worst_zone to best_zone. Skipped entirely
/// when the two coincide or the losing zone is already empty, so the total
/// reward never changes.
inline ZoneState update_rewards(ZoneState zones, std::size_t best_zone, std::size_t worst_zone) {
    if (best_zone >= zones.n_zones() || worst_zone >= zones.n_zones()) {
        throw InvalidArgument("update_rewards: zone index out of range");
    }
    if (best_zone == worst_zone || zones.rewards[worst_zone] == 0) return zones;
    zones.rewards[best_zone] += 1;
    zones.rewards[worst_zone] -= 1;
    return zones;
}

inline std::vector<Vector> sample_random(const RandomSearchState& state, Eigen::Index d, Rng& rng) {
    if (d < 1) throw InvalidArgument("sample_random: d must be positive");
    std::vector<Vector> out(state.n_random);
    for (auto& p : out) {
        p.resize(d);
        for (Eigen::Index j = 0; j < d; ++j) p(j) = rng.uniform(state.lower, state.upper);
    }
    return out;
}

struct Winner {
    Vector point;
    bool bandit_won = false;
};

/// The bandit point wins only on a strict improvement; ties go to random search.
inline Winner select_winner(const Vector& bandit_point, double bandit_value, const Vector& random_point,
                            double random_value) {
    if (bandit_value < random_value) return {bandit_point, true};
    return {random_point, false};
}

/// Contracts [lower, upper] after a bandit win, provided the result still
/// satisfies limits.lower <= lower' < upper' <= limits.upper. In adaptive
/// mode only the side farther from `bandit_point` (by its mean coordinate)
/// moves.
inline RandomSearchState shrink_bounds(RandomSearchState state, bool bandit_won,
                                       const std::optional<Vector>& bandit_point = std::nullopt) {
    if (!bandit_won) return state;
    double dl = state.shrink_lower;
    double du = state.shrink_upper;
    if (state.mode == ShrinkMode::adaptive && bandit_point && bandit_point->size() > 0) {
        const double centre = bandit_point->mean();
        if (centre - state.lower < state.upper - centre) {
            dl = 0.0;
        } else {
            du = 0.0;
        }
    }
    const double new_lower = state.lower + dl;
    const double new_upper = state.upper - du;
    if (state.limits.lower <= new_lower && new_lower < new_upper && new_upper <= state.limits.upper) {
        state.lower = new_lower;
        state.upper = new_upper;
    }
    return state;
}

}  // namespace drdf
