#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "drdf/optimizer.hpp"

namespace drdf {

namespace detail {

inline nlohmann::json to_json_array(const Vector& v) {
    auto arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

inline Vector vector_from_json(const nlohmann::json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

}  // namespace detail

inline nlohmann::json to_json(const RunReport& r) {
    nlohmann::json j;
    j["method"] = r.method;
    j["seed"] = r.seed;
    j["best_objective_full"] = r.best_objective_full;
    j["best_objective_reduced"] = r.best_objective_reduced;
    j["best_reduced"] = detail::to_json_array(r.best_reduced);
    j["best_full"] = detail::to_json_array(r.best_full);
    j["initial_objectives"] = r.initial_objectives;
    j["wall_time"] = r.wall_time;
    j["config"] = nlohmann::json(r.config);
    j["config_source"] = r.config_source;
    auto trace = nlohmann::json::array();
    for (const auto& t : r.trace) {
        trace.push_back({{"iteration", t.iteration},
                         {"point", detail::to_json_array(t.point)},
                         {"objective", t.objective},
                         {"bandit_won", t.bandit_won},
                         {"rewards", t.rewards},
                         {"lower", t.lower},
                         {"upper", t.upper}});
    }
    j["trace"] = std::move(trace);
    return j;
}

inline RunReport run_report_from_json(const nlohmann::json& j) {
    RunReport r;
    r.method = j.at("method").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.best_objective_full = j.at("best_objective_full").get<double>();
    r.best_objective_reduced = j.at("best_objective_reduced").get<double>();
    r.best_reduced = detail::vector_from_json(j.at("best_reduced"));
    r.best_full = detail::vector_from_json(j.at("best_full"));
    r.initial_objectives = j.at("initial_objectives").get<std::vector<double>>();
    r.wall_time = j.at("wall_time").get<double>();
    for (const auto& [k, v] : j.at("config").items()) r.config[k] = v.get<std::string>();
    r.config_source = j.value("config_source", std::string());
    for (const auto& t : j.at("trace")) {
        TraceEntry e;
        e.iteration = t.at("iteration").get<int>();
        e.point = detail::vector_from_json(t.at("point"));
        e.objective = t.at("objective").get<double>();
        e.bandit_won = t.at("bandit_won").get<bool>();
        e.rewards = t.at("rewards").get<std::vector<int>>();
        e.lower = t.at("lower").get<double>();
        e.upper = t.at("upper").get<double>();
        r.trace.push_back(std::move(e));
    }
    return r;
}

inline std::string serialize(const RunReport& r) { return to_json(r).dump(2) + "\n"; }

inline RunReport parse_run_report(const std::string& text) { return run_report_from_json(nlohmann::json::parse(text)); }

}  // namespace drdf
