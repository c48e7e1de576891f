#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "drdf/dimension.hpp"
#include "drdf/error.hpp"
#include "drdf/random.hpp"
#include "drdf/sampling.hpp"

namespace drdf {

enum class ModelKind { seir, sis };

inline std::string_view to_string(ModelKind k) { return k == ModelKind::seir ? "seir" : "sis"; }

inline ModelKind parse_model_kind(std::string_view s) {
    if (s == "seir") return ModelKind::seir;
    if (s == "sis") return ModelKind::sis;
    throw InvalidArgument("unknown model '" + std::string(s) + "' (expected seir or sis)");
}

namespace detail {
inline void check_rate(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument(std::string("rate ") + name + " must lie in [0, 1]");
}
}  // namespace detail

struct SeirParams {
    double tau = 0.01;         ///< natural birth rate, equal to the death rate
    double beta = 0.9;         ///< contact rate
    double alpha_rate = 0.25;  ///< exposed -> infectious
    double gamma = 0.1;        ///< recovery

    void validate() const {
        detail::check_rate(tau, "tau");
        detail::check_rate(beta, "beta");
        detail::check_rate(alpha_rate, "alpha_rate");
        detail::check_rate(gamma, "gamma");
    }
};

struct SisParams {
    double tau = 0.01;
    double beta = 0.8;
    double gamma = 0.2;
    double sigma = 0.1;  ///< diffusion coefficient on the contact rate

    void validate() const {
        detail::check_rate(tau, "tau");
        detail::check_rate(beta, "beta");
        detail::check_rate(gamma, "gamma");
        if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
    }
};

/// Population fractions. SIS states keep E = R = 0.
struct EpidemicState {
    double S = 0.0;
    double E = 0.0;
    double I = 0.0;
    double R = 0.0;

    [[nodiscard]] double total() const { return S + E + I + R; }
    friend bool operator==(const EpidemicState&, const EpidemicState&) = default;
};

struct ObjectiveParams {
    double c1 = 10000.0;  ///< cost per unit infectious fraction per epoch
    double c2 = 100.0;    ///< weight of the control cost
    int t0 = 1;
    int t_f = 100;
    Bounds bounds{0.0, 1.0};
};

struct EpidemicInstance {
    ModelKind kind = ModelKind::seir;
    SeirParams seir{};
    SisParams sis{};
    EpidemicState initial{0.99, 0.0, 0.01, 0.0};
    ObjectiveParams objective{};
    /// Integration step in epochs; 1/step_size must be a whole number.
    double step_size = 1.0;
    /// Use the recovery term dR/dt = I - tau R + u I exactly as printed in the
    /// source model. Breaks S+E+I+R = 1 unless gamma = 1.
    bool literal_recovery = false;

    [[nodiscard]] int substeps() const { return static_cast<int>(std::lround(1.0 / step_size)); }

    void validate() const {
        if (kind == ModelKind::seir) seir.validate(); else sis.validate();
        objective.bounds.validate();
        if (objective.t_f < 1) throw InvalidArgument("t_f must be positive");
        if (objective.t0 != 1) throw InvalidArgument("t0 must be 1");
        if (objective.c1 < 0.0 || objective.c2 < 0.0) throw InvalidArgument("c1 and c2 must be nonnegative");
        if (!(step_size > 0.0 && step_size <= 1.0) ||
            std::abs(1.0 / step_size - substeps()) > 1e-9) {
            throw InvalidArgument("step_size must be 1/n for a positive integer n");
        }
        const auto& x = initial;
        if (x.S < 0 || x.E < 0 || x.I < 0 || x.R < 0) throw InvalidArgument("initial state must be nonnegative");
        if (kind == ModelKind::sis && (x.E != 0.0 || x.R != 0.0)) {
            throw InvalidArgument("SIS initial state has no E or R compartment");
        }
        if (std::abs(x.total() - 1.0) > 1e-9) throw InvalidArgument("initial state must sum to 1");
    }
};

inline EpidemicInstance default_seir_instance() {
    EpidemicInstance inst;
    inst.kind = ModelKind::seir;
    inst.initial = {0.99, 0.0, 0.01, 0.0};
    inst.objective.t_f = 100;
    return inst;
}

inline EpidemicInstance default_sis_instance() {
    EpidemicInstance inst;
    inst.kind = ModelKind::sis;
    inst.initial = {0.97, 0.0, 0.03, 0.0};
    inst.objective.t_f = 200;
    return inst;
}

inline EpidemicInstance default_instance(ModelKind kind) {
    return kind == ModelKind::seir ? default_seir_instance() : default_sis_instance();
}

/// Nonconvex per-epoch control cost 0.3|sin 10u| + 2.1|sin u| + u^2.
inline double control_cost(double u) {
    return 0.3 * std::abs(std::sin(10.0 * u)) + 2.1 * std::abs(std::sin(u)) + u * u;
}

namespace detail {

inline EpidemicState project_simplex(EpidemicState x) {
    x.S = std::max(x.S, 0.0);
    x.E = std::max(x.E, 0.0);
    x.I = std::max(x.I, 0.0);
    x.R = std::max(x.R, 0.0);
    const double total = x.total();
    if (total > 0.0) {
        x.S /= total;
        x.E /= total;
        x.I /= total;
        x.R /= total;
    }
    return x;
}

}  // namespace detail

/// One forward-Euler step of the controlled SEIR system. The control u
/// moves infectious individuals straight to R.
inline EpidemicState seir_step(const EpidemicState& x, double u, const SeirParams& p, double h,
                               bool literal_recovery = false) {
    const double infection = p.beta * x.S * x.I;
    const double dS = p.tau - infection - p.tau * x.S;
    const double dE = infection - (p.tau + p.alpha_rate) * x.E;
    const double dI = p.alpha_rate * x.E - (p.tau + p.gamma) * x.I - u * x.I;
    const double recovery = literal_recovery ? x.I : p.gamma * x.I;
    const double dR = recovery - p.tau * x.R + u * x.I;
    EpidemicState next{x.S + h * dS, x.E + h * dE, x.I + h * dI, x.R + h * dR};
    if (literal_recovery) {
        next.S = std::max(next.S, 0.0);
        next.E = std::max(next.E, 0.0);
        next.I = std::max(next.I, 0.0);
        next.R = std::max(next.R, 0.0);
        return next;
    }
    return detail::project_simplex(next);
}

/// One Euler-Maruyama step of the stochastic SIS system; `dB` is the
/// Brownian increment over the step (a Normal(0, h) draw).
inline EpidemicState sis_step(const EpidemicState& x, double u, const SisParams& p, double h, double dB) {
    const double drift_I = p.beta * x.S * x.I - (p.tau + p.gamma) * x.I - u * x.I;
    const double drift_S = p.tau - p.beta * x.S * x.I + p.gamma * x.I - p.tau * x.S + u * x.I;
    const double noise = p.sigma * x.S * x.I * dB;
    double S = std::clamp(x.S + h * drift_S - noise, 0.0, 1.0);
    double I = std::clamp(x.I + h * drift_I + noise, 0.0, 1.0);
    const double total = S + I;
    if (total > 0.0) {
        S /= total;
        I = 1.0 - S;
    }
    return {S, 0.0, I, 0.0};
}

struct Trajectory {
    std::vector<int> epochs;            ///< 1-based epoch of each record
    std::vector<EpidemicState> states;  ///< state at the start of the epoch
    std::vector<double> controls;
    std::vector<double> costs;          ///< weighted per-record cost

    [[nodiscard]] double total_cost() const {
        double sum = 0.0;
        for (double c : costs) sum += c;
        return sum;
    }
    [[nodiscard]] double peak_infectious() const {
        double peak = 0.0;
        for (const auto& s : states) peak = std::max(peak, s.I);
        return peak;
    }
};

namespace detail {

/// Integrates a piecewise-constant control: segment k starts at epochs[k],
/// holds controls[k] for weights[k] epochs and contributes
/// weights[k] * (c1 I + c2 f(u)) evaluated at the segment start.
inline Trajectory integrate_segments(const EpidemicInstance& inst, const std::vector<int>& epochs,
                                     const Vector& controls, const std::vector<int>& weights, Rng* noise) {
    inst.validate();
    const int n_sub = inst.substeps();
    Trajectory traj;
    const auto n = static_cast<std::size_t>(controls.size());
    traj.epochs.reserve(n);
    traj.states.reserve(n);
    traj.controls.reserve(n);
    traj.costs.reserve(n);
    EpidemicState x = inst.initial;
    const auto& obj = inst.objective;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = controls(static_cast<Eigen::Index>(k));
        const double w = weights[k];
        traj.epochs.push_back(epochs[k]);
        traj.states.push_back(x);
        traj.controls.push_back(u);
        traj.costs.push_back(w * (obj.c1 * x.I + obj.c2 * control_cost(u)));
        const double h = w / n_sub;
        for (int s = 0; s < n_sub; ++s) {
            if (inst.kind == ModelKind::seir) {
                x = seir_step(x, u, inst.seir, h, inst.literal_recovery);
            } else {
                const double dB = noise ? noise->normal(0.0, std::sqrt(h)) : 0.0;
                x = sis_step(x, u, inst.sis, h, dB);
            }
        }
    }
    return traj;
}

}  // namespace detail

/// Simulates epochs 1..t_f applying control(t-1) during epoch t. SIS draws
/// one Brownian increment per integration step from `noise`; passing no
/// stream integrates the drift only.
inline Trajectory simulate(const EpidemicInstance& inst, const Vector& control, Rng* noise = nullptr) {
    const int t_f = inst.objective.t_f;
    if (control.size() != t_f) {
        throw InvalidArgument("simulate: control has " + std::to_string(control.size()) +
                              " values, horizon is " + std::to_string(t_f));
    }
    std::vector<int> epochs(static_cast<std::size_t>(t_f));
    for (int t = 0; t < t_f; ++t) epochs[static_cast<std::size_t>(t)] = t + 1;
    return detail::integrate_segments(inst, epochs, control, std::vector<int>(epochs.size(), 1), noise);
}

/// Accumulated objective value, rectangle rule with one-epoch steps.
inline double evaluate_full(const EpidemicInstance& inst, const Vector& control, Rng* noise = nullptr) {
    return simulate(inst, control, noise).total_cost();
}

/// Coarse-grid surrogate of the objective: each scheduled epoch opens a
/// step spanning phi epochs, so the cost is proportional to d rather than
/// t_f. The trailing run after the last scheduled epoch holds the last
/// control and is stepped in chunks of at most phi epochs. Identical to
/// evaluate_full at d = t_f.
inline Trajectory simulate_reduced(const EpidemicInstance& inst, const Vector& reduced,
                                   const ReductionSchedule& schedule, Rng* noise = nullptr) {
    if (schedule.t_f != inst.objective.t_f) throw InvalidArgument("evaluate_reduced: schedule horizon mismatch");
    if (reduced.size() != schedule.d) {
        throw InvalidArgument("evaluate_reduced: expected " + std::to_string(schedule.d) + " values, got " +
                              std::to_string(reduced.size()));
    }
    std::vector<int> epochs;
    std::vector<int> weights;
    std::vector<double> controls;
    for (int k = 0; k < schedule.d; ++k) {
        int start = schedule.epochs[static_cast<std::size_t>(k)];
        int remaining = schedule.weight(k);
        while (remaining > 0) {
            const int w = std::min(remaining, schedule.phi);
            epochs.push_back(start);
            weights.push_back(w);
            controls.push_back(reduced(k));
            start += w;
            remaining -= w;
        }
    }
    const Vector u = Eigen::Map<const Vector>(controls.data(), static_cast<Eigen::Index>(controls.size()));
    return detail::integrate_segments(inst, epochs, u, weights, noise);
}

inline double evaluate_reduced(const EpidemicInstance& inst, const Vector& reduced,
                               const ReductionSchedule& schedule, Rng* noise = nullptr) {
    return simulate_reduced(inst, reduced, schedule, noise).total_cost();
}

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

/// CSV with header t,S,E,I,R,u,cost. E and R are left empty for SIS.
inline void write_trajectory_csv(std::ostream& os, ModelKind kind, const Trajectory& traj) {
    os << "t,S,E,I,R,u,cost\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& x = traj.states[i];
        os << traj.epochs[i] << ',' << format_double(x.S) << ',';
        if (kind == ModelKind::seir) os << format_double(x.E);
        os << ',' << format_double(x.I) << ',';
        if (kind == ModelKind::seir) os << format_double(x.R);
        os << ',' << format_double(traj.controls[i]) << ',' << format_double(traj.costs[i]) << '\n';
    }
}

}  // namespace drdf
