#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "drdf/bench.hpp"
#include "drdf/config.hpp"
#include "drdf/epidemic.hpp"
#include "drdf/optimizer.hpp"
#include "drdf/report.hpp"

namespace drdf::app {

enum ExitCode : int { kOk = 0, kRunFailure = 1, kConfigError = 2 };

/// Command-line overrides shared by every subcommand.
struct Options {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> d;
    std::optional<std::string> fill;
    std::optional<std::string> model;
    std::optional<int> iterations;
    std::optional<std::string> control_path;
    std::string out_dir = ".";
    bool baseline = false;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

/// The config file (if any) with command-line flags layered on top.
struct LoadedConfig {
    KeyValues kv;
    std::string source;
};

inline LoadedConfig load(const Options& opts) {
    LoadedConfig cfg;
    if (opts.config_path) {
        cfg.source = read_file(*opts.config_path);
        cfg.kv = parse_key_values(cfg.source);
    }
    if (opts.model) cfg.kv["model"] = *opts.model;
    if (opts.seed) cfg.kv["seed"] = std::to_string(*opts.seed);
    if (opts.d) cfg.kv["d"] = std::to_string(*opts.d);
    if (opts.fill) cfg.kv["fill"] = *opts.fill;
    if (opts.iterations) cfg.kv["iterations"] = std::to_string(*opts.iterations);
    return cfg;
}

/// Control values, either as bare numbers separated by commas or
/// whitespace, or as a CSV with a header row (the `u` column is used, else
/// the last one), e.g. the best_control.csv written by `optimize`.
inline Vector parse_control(const std::string& text) {
    std::vector<double> values;
    std::istringstream lines(text);
    std::string line;
    std::optional<std::size_t> column;
    bool first = true;
    auto split = [](const std::string& l) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ss(l);
        while (std::getline(ss, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\r"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            out.push_back(cell);
        }
        return out;
    };
    while (std::getline(lines, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (first) {
            first = false;
            if (line.find_first_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ") != std::string::npos) {
                const auto header = split(line);
                column = header.size() - 1;
                for (std::size_t i = 0; i < header.size(); ++i) {
                    if (header[i] == "u") column = i;
                }
                continue;
            }
        }
        if (column) {
            const auto cells = split(line);
            if (*column >= cells.size()) throw ConfigError("control file: short row '" + line + "'");
            values.push_back(detail::parse_double("control", cells[*column]));
        } else {
            for (auto& ch : line) {
                if (ch == ',') ch = ' ';
            }
            std::istringstream toks(line);
            std::string tok;
            while (toks >> tok) values.push_back(detail::parse_double("control", tok));
        }
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline std::string control_csv(const Vector& u) {
    std::ostringstream os;
    os << "t,u\n";
    for (Eigen::Index i = 0; i < u.size(); ++i) os << i + 1 << ',' << format_double(u(i)) << '\n';
    return os.str();
}

inline std::string trajectory_csv(ModelKind kind, const Trajectory& traj) {
    std::ostringstream os;
    write_trajectory_csv(os, kind, traj);
    return os.str();
}

/// Writes report.json, result.csv, best_control.csv and trajectory.csv.
inline int optimize(const Options& opts, std::ostream& log = std::cout) {
    OptimizerConfig config;
    LoadedConfig loaded;
    try {
        loaded = load(opts);
        config = config_from_key_values(loaded.kv);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    RunReport report;
    try {
        report = opts.baseline ? run_baseline_standard_bo(config) : run(config);
    } catch (const std::exception& e) {
        log << "run failed: " << e.what() << '\n';
        return kRunFailure;
    }
    report.config_source = loaded.source;

    const std::filesystem::path out(opts.out_dir);
    write_file(out / "report.json", serialize(report));
    std::ostringstream result;
    result << "method,model,d,fill,seed,aofv,rt_seconds\n"
           << report.method << ',' << to_string(config.instance.kind) << ',' << report.best_reduced.size() << ','
           << to_string(config.fill) << ',' << config.seed << ',' << format_double(report.best_objective_full) << ','
           << format_double(report.wall_time) << '\n';
    write_file(out / "result.csv", result.str());
    write_file(out / "best_control.csv", control_csv(report.best_full));
    Rng noise = Rng(config.seed).substream({detail::kFinalNoise});
    const Trajectory traj =
        simulate(config.instance, report.best_full, config.instance.kind == ModelKind::sis ? &noise : nullptr);
    write_file(out / "trajectory.csv", trajectory_csv(config.instance.kind, traj));
    log << report.method << " " << to_string(config.instance.kind) << " d=" << report.best_reduced.size()
        << " aofv=" << format_double(report.best_objective_full) << " rt=" << report.wall_time << "s\n";
    return kOk;
}

/// Writes sweep.csv, sweep_summary.csv and one report per cell under reports/.
inline int sweep(const Options& opts, std::ostream& log = std::cout) {
    SweepSpec spec;
    try {
        auto loaded = load(opts);
        spec = sweep_spec_from_key_values(loaded.kv);
        spec.baseline = opts.baseline;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    const SweepResult result = drdf::sweep(spec);
    const std::filesystem::path out(opts.out_dir);
    std::ostringstream table, summary;
    write_sweep_csv(table, result);
    write_sweep_summary_csv(summary, spec.base.instance.kind, result);
    write_file(out / "sweep.csv", table.str());
    write_file(out / "sweep_summary.csv", summary.str());
    for (const auto& c : result.cells) {
        if (!c.ok) {
            log << "cell d=" << c.d << " fill=" << to_string(c.fill) << " seed=" << c.seed << " failed: " << c.error
                << '\n';
            continue;
        }
        const std::string name = std::string(to_string(c.model)) + "_d" + std::to_string(c.d) + "_" +
                                 std::string(to_string(c.fill)) + "_s" + std::to_string(c.seed) + ".json";
        write_file(out / "reports" / name, serialize(c.report));
    }
    log << summary.str();
    return result.all_ok() ? kOk : kRunFailure;
}

/// Trajectory of a given full-horizon control (zero control when no file
/// is given). SIS noise comes from the same stream the optimizer uses for
/// its final evaluation under the configured seed.
inline int simulate_command(const Options& opts, std::ostream& log = std::cout) {
    OptimizerConfig config;
    Vector control;
    try {
        config = config_from_key_values(load(opts).kv);
        const int t_f = config.instance.objective.t_f;
        control = opts.control_path ? parse_control(read_file(*opts.control_path)) : Vector::Zero(t_f);
        if (control.size() != t_f) {
            throw ConfigError("control file has " + std::to_string(control.size()) + " values, horizon is " +
                              std::to_string(t_f));
        }
        for (Eigen::Index i = 0; i < control.size(); ++i) {
            if (!config.instance.objective.bounds.contains(control(i))) {
                throw ConfigError("control value " + format_double(control(i)) + " outside bounds");
            }
        }
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    Rng noise = Rng(config.seed).substream({detail::kFinalNoise});
    const Trajectory traj =
        simulate(config.instance, control, config.instance.kind == ModelKind::sis ? &noise : nullptr);
    write_file(std::filesystem::path(opts.out_dir) / "trajectory.csv", trajectory_csv(config.instance.kind, traj));
    log << "aofv=" << format_double(traj.total_cost()) << " peak_I=" << format_double(traj.peak_infectious()) << '\n';
    return kOk;
}

}  // namespace drdf::app
