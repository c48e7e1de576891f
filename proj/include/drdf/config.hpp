#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "drdf/acquisition.hpp"
#include "drdf/dimension.hpp"
#include "drdf/epidemic.hpp"
#include "drdf/error.hpp"
#include "drdf/gp_surrogate.hpp"
#include "drdf/local_search.hpp"
#include "drdf/sampling.hpp"

namespace drdf {

using KeyValues = std::map<std::string, std::string, std::less<>>;

struct OptimizerConfig {
    EpidemicInstance instance = default_seir_instance();
    int d = 40;
    int iterations = 100;
    int n_zones = 10;
    int m_points = 5;
    int n_random = 50;
    int n_init = 10;
    AcquisitionParams acquisition{};
    KernelParams kernel{};
    /// Prior mean of the surrogate, in standardized objective units.
    double prior_mean = 0.0;
    AdamConfig adam{};
    double shrink_lower = 0.0;
    double shrink_upper = 0.0;
    ShrinkMode shrink_mode = ShrinkMode::fixed;
    FillStrategy fill = FillStrategy::linear;
    std::uint64_t seed = 0;

    void validate() const {
        instance.validate();
        const int t_f = instance.objective.t_f;
        if (d < 1 || d > t_f) throw InvalidArgument("config: need 1 <= d <= t_f");
        if (iterations < 1) throw InvalidArgument("config: iterations must be >= 1");
        if (n_init < 2) throw InvalidArgument("config: n_init must be >= 2");
        if (n_zones < 1 || m_points < 0 || n_random < 0) throw InvalidArgument("config: invalid sampler sizes");
        if (m_points == 0 && n_random == 0) throw InvalidArgument("config: sampler would produce no candidates");
        if (acquisition.k_weight < 0.0) throw InvalidArgument("config: k_weight must be nonnegative");
        if (shrink_lower < 0.0 || shrink_upper < 0.0) throw InvalidArgument("config: shrink amounts must be >= 0");
        kernel.validate();
        adam.validate();
    }
};

/// Reduced dimension used when a config names none: 40% of the horizon.
inline int default_reduced_dimension(int t_f) { return std::max(1, static_cast<int>(std::lround(0.4 * t_f))); }

inline std::string_view to_string(ShrinkMode m) { return m == ShrinkMode::fixed ? "fixed" : "adaptive"; }

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// a trailing `# ...` after a value is stripped.
inline KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

namespace detail {

inline double parse_double(std::string_view key, std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("key '" + std::string(key) + "': not a number: '" + std::string(s) + "'");
    }
    return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view s) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("key '" + std::string(key) + "': not an integer: '" + std::string(s) + "'");
    }
    return v;
}

inline bool parse_bool(std::string_view key, std::string_view s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("key '" + std::string(key) + "': not a boolean: '" + std::string(s) + "'");
}

inline const std::set<std::string, std::less<>>& sweep_keys() {
    static const std::set<std::string, std::less<>> keys{"d_values", "fills", "seeds", "reference_d"};
    return keys;
}

}  // namespace detail

/// Builds a config from key/value pairs on top of the defaults of the
/// selected model. Keys reserved for sweeps are ignored here; any other
/// unknown key is an error.
inline OptimizerConfig config_from_key_values(const KeyValues& kv) {
    OptimizerConfig c;
    auto get = [&](std::string_view key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    try {
        if (auto* m = get("model")) c.instance = default_instance(parse_model_kind(*m));
        auto& inst = c.instance;
        bool d_given = false;
        for (const auto& [key, value] : kv) {
            const auto num = [&] { return detail::parse_double(key, value); };
            const auto integer = [&] { return detail::parse_int<int>(key, value); };
            if (key == "model") continue;
            if (detail::sweep_keys().count(key)) continue;
            if (key == "t_f") inst.objective.t_f = integer();
            else if (key == "c1") inst.objective.c1 = num();
            else if (key == "c2") inst.objective.c2 = num();
            else if (key == "u_lower") inst.objective.bounds.lower = num();
            else if (key == "u_upper") inst.objective.bounds.upper = num();
            else if (key == "step_size") inst.step_size = num();
            else if (key == "literal_recovery") inst.literal_recovery = detail::parse_bool(key, value);
            else if (key == "tau") inst.seir.tau = inst.sis.tau = num();
            else if (key == "beta") inst.seir.beta = inst.sis.beta = num();
            else if (key == "gamma") inst.seir.gamma = inst.sis.gamma = num();
            else if (key == "alpha_rate") inst.seir.alpha_rate = num();
            else if (key == "sigma") inst.sis.sigma = num();
            else if (key == "S0") inst.initial.S = num();
            else if (key == "E0") inst.initial.E = num();
            else if (key == "I0") inst.initial.I = num();
            else if (key == "R0") inst.initial.R = num();
            else if (key == "d") { c.d = integer(); d_given = true; }
            else if (key == "iterations") c.iterations = integer();
            else if (key == "n_init") c.n_init = integer();
            else if (key == "n_zones") c.n_zones = integer();
            else if (key == "m_points") c.m_points = integer();
            else if (key == "n_random") c.n_random = integer();
            else if (key == "k_weight") c.acquisition.k_weight = num();
            else if (key == "length_scale") c.kernel.length_scale = num();
            else if (key == "jitter") c.kernel.jitter = num();
            else if (key == "prior_mean") c.prior_mean = num();
            else if (key == "adam_steps") c.adam.steps = integer();
            else if (key == "adam_lr") c.adam.learning_rate = num();
            else if (key == "adam_beta1") c.adam.beta1 = num();
            else if (key == "adam_beta2") c.adam.beta2 = num();
            else if (key == "adam_epsilon") c.adam.epsilon = num();
            else if (key == "fd_step") c.adam.fd_step = num();
            else if (key == "shrink_lower") c.shrink_lower = num();
            else if (key == "shrink_upper") c.shrink_upper = num();
            else if (key == "shrink_mode") {
                if (value == "fixed") c.shrink_mode = ShrinkMode::fixed;
                else if (value == "adaptive") c.shrink_mode = ShrinkMode::adaptive;
                else throw ConfigError("key 'shrink_mode': expected fixed or adaptive");
            }
            else if (key == "fill") c.fill = parse_fill_strategy(value);
            else if (key == "seed") c.seed = detail::parse_int<std::uint64_t>(key, value);
            else throw ConfigError("unknown key '" + key + "'");
        }
        if (!d_given) c.d = default_reduced_dimension(inst.objective.t_f);
        c.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

/// Flat description of every effective setting, suitable for reports and
/// for feeding back into config_from_key_values.
inline KeyValues to_key_values(const OptimizerConfig& c) {
    const auto& inst = c.instance;
    const bool seir = inst.kind == ModelKind::seir;
    KeyValues kv;
    auto put = [&](const char* key, double v) { kv[key] = format_double(v); };
    kv["model"] = std::string(to_string(inst.kind));
    kv["t_f"] = std::to_string(inst.objective.t_f);
    put("c1", inst.objective.c1);
    put("c2", inst.objective.c2);
    put("u_lower", inst.objective.bounds.lower);
    put("u_upper", inst.objective.bounds.upper);
    put("step_size", inst.step_size);
    kv["literal_recovery"] = inst.literal_recovery ? "true" : "false";
    put("tau", seir ? inst.seir.tau : inst.sis.tau);
    put("beta", seir ? inst.seir.beta : inst.sis.beta);
    put("gamma", seir ? inst.seir.gamma : inst.sis.gamma);
    if (seir) put("alpha_rate", inst.seir.alpha_rate);
    else put("sigma", inst.sis.sigma);
    put("S0", inst.initial.S);
    put("I0", inst.initial.I);
    if (seir) {
        put("E0", inst.initial.E);
        put("R0", inst.initial.R);
    }
    kv["d"] = std::to_string(c.d);
    kv["iterations"] = std::to_string(c.iterations);
    kv["n_init"] = std::to_string(c.n_init);
    kv["n_zones"] = std::to_string(c.n_zones);
    kv["m_points"] = std::to_string(c.m_points);
    kv["n_random"] = std::to_string(c.n_random);
    put("k_weight", c.acquisition.k_weight);
    put("length_scale", c.kernel.length_scale);
    put("jitter", c.kernel.jitter);
    put("prior_mean", c.prior_mean);
    kv["adam_steps"] = std::to_string(c.adam.steps);
    put("adam_lr", c.adam.learning_rate);
    put("adam_beta1", c.adam.beta1);
    put("adam_beta2", c.adam.beta2);
    put("adam_epsilon", c.adam.epsilon);
    put("fd_step", c.adam.fd_step);
    put("shrink_lower", c.shrink_lower);
    put("shrink_upper", c.shrink_upper);
    kv["shrink_mode"] = std::string(to_string(c.shrink_mode));
    kv["fill"] = std::string(to_string(c.fill));
    kv["seed"] = std::to_string(c.seed);
    return kv;
}

}  // namespace drdf
