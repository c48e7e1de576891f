#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "drdf/error.hpp"
#include "drdf/gp_surrogate.hpp"
#include "drdf/sampling.hpp"

namespace drdf {

using Objective = std::function<double(const Vector&)>;
using Gradient = std::function<Vector(const Vector&)>;

struct AdamConfig {
    int steps = 100;
    double learning_rate = 0.02;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double fd_step = 1e-3;

    void validate() const {
        if (steps < 0) throw InvalidArgument("adam: steps must be nonnegative");
        if (!(learning_rate > 0.0)) throw InvalidArgument("adam: learning_rate must be positive");
        if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
            throw InvalidArgument("adam: beta1 and beta2 must lie in [0, 1)");
        }
        if (!(epsilon > 0.0)) throw InvalidArgument("adam: epsilon must be positive");
        if (!(fd_step > 0.0)) throw InvalidArgument("adam: fd_step must be positive");
    }
};

namespace detail {
inline double checked_eval(const Objective& f, const Vector& x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        std::string where;
        for (Eigen::Index i = 0; i < x.size(); ++i) where += (i ? "," : "") + std::to_string(x(i));
        throw EvaluationFailure("objective returned a non-finite value at (" + where + ")");
    }
    return v;
}
}  // namespace detail

/// Central differences, falling back to one-sided differences where a
/// central stencil would leave `bounds`. Never evaluates outside the box.
inline Vector fd_gradient(const Objective& f, const Vector& x, double h, const Bounds& bounds) {
    if (!(h > 0.0)) throw InvalidArgument("fd_gradient: step must be positive");
    Vector g(x.size());
    bool have_fx = false;
    double fx = 0.0;
    auto centre = [&] {
        if (!have_fx) {
            fx = detail::checked_eval(f, x);
            have_fx = true;
        }
        return fx;
    };
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const bool can_up = x(i) + h <= bounds.upper;
        const bool can_down = x(i) - h >= bounds.lower;
        if (can_up && can_down) {
            probe(i) = x(i) + h;
            const double up = detail::checked_eval(f, probe);
            probe(i) = x(i) - h;
            const double down = detail::checked_eval(f, probe);
            g(i) = (up - down) / (2.0 * h);
        } else if (can_up) {
            probe(i) = x(i) + h;
            g(i) = (detail::checked_eval(f, probe) - centre()) / h;
        } else if (can_down) {
            probe(i) = x(i) - h;
            g(i) = (centre() - detail::checked_eval(f, probe)) / h;
        } else {
            g(i) = 0.0;
        }
        probe(i) = x(i);
    }
    return g;
}

struct AdamResult {
    Vector best;
    double best_value = 0.0;
    /// Iterate after each update, projected onto the box; size == steps.
    std::vector<Vector> iterates;
};

/// Adam with bias-corrected moments, projecting onto the box after every
/// update. Returns the best point visited (the start included), so the
/// objective never ends up worse than at `start`.
inline AdamResult adam_search(const Objective& f, const Gradient& grad, const Vector& start,
                              const AdamConfig& config, const Bounds& bounds) {
    config.validate();
    for (Eigen::Index i = 0; i < start.size(); ++i) {
        if (!bounds.contains(start(i))) throw InvalidArgument("adam_search: start outside bounds");
    }
    AdamResult result;
    result.best = start;
    result.best_value = detail::checked_eval(f, start);
    result.iterates.reserve(static_cast<std::size_t>(config.steps));

    Vector x = start;
    Vector m = Vector::Zero(start.size());
    Vector v = Vector::Zero(start.size());
    double b1t = 1.0;
    double b2t = 1.0;
    for (int t = 1; t <= config.steps; ++t) {
        const Vector g = grad(x);
        m = config.beta1 * m + (1.0 - config.beta1) * g;
        v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseProduct(g);
        b1t *= config.beta1;
        b2t *= config.beta2;
        const Vector m_hat = m / (1.0 - b1t);
        const Vector v_hat = v / (1.0 - b2t);
        x = x.array() - config.learning_rate * m_hat.array() / (v_hat.array().sqrt() + config.epsilon);
        x = x.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
        result.iterates.push_back(x);
        const double fx = detail::checked_eval(f, x);
        if (fx < result.best_value) {
            result.best_value = fx;
            result.best = x;
        }
    }
    return result;
}

/// Adam driven by finite-difference gradients of `f`.
inline AdamResult adam_search(const Objective& f, const Vector& start, const AdamConfig& config,
                              const Bounds& bounds) {
    return adam_search(
        f, [&](const Vector& x) { return fd_gradient(f, x, config.fd_step, bounds); }, start, config, bounds);
}

}  // namespace drdf
