#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "drdf/config.hpp"
#include "drdf/error.hpp"
#include "drdf/optimizer.hpp"

namespace drdf {

/// AOFV(d) / AOFV(reference).
inline double aofv_ratio(double aofv_d, double aofv_ref) {
    if (!(aofv_ref > 0.0)) throw InvalidArgument("aofv_ratio: reference value must be positive");
    return aofv_d / aofv_ref;
}

/// RT(d) / RT(reference).
inline double rt_ratio(double rt_d, double rt_ref) {
    if (!(rt_ref > 0.0)) throw InvalidArgument("rt_ratio: reference time must be positive");
    return rt_d / rt_ref;
}

inline double median(std::vector<double> xs) {
    std::erase_if(xs, [](double x) { return std::isnan(x); });
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const auto n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

struct SweepSpec {
    OptimizerConfig base;
    std::vector<int> d_values;
    std::vector<FillStrategy> fills;
    std::vector<std::uint64_t> seeds;
    int reference_d = 0;
    bool baseline = false;

    void validate() const {
        base.validate();
        if (d_values.empty() || fills.empty() || seeds.empty()) throw InvalidArgument("sweep: empty grid");
        if (std::find(d_values.begin(), d_values.end(), reference_d) == d_values.end()) {
            throw InvalidArgument("sweep: reference_d must be one of d_values");
        }
        for (int d : d_values) {
            if (d < 1 || d > base.instance.objective.t_f) throw InvalidArgument("sweep: d out of range");
        }
    }
};

namespace detail {

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& text, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(parse(key, item));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

}  // namespace detail

/// Sweep grid from a config file: optimizer keys plus comma-separated
/// `d_values`, `fills`, `seeds` and an optional `reference_d` (default t_f).
inline SweepSpec sweep_spec_from_key_values(const KeyValues& kv) {
    SweepSpec spec;
    spec.base = config_from_key_values(kv);
    const int t_f = spec.base.instance.objective.t_f;
    auto find = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto* v = find("d_values")) {
        spec.d_values = detail::parse_list<int>("d_values", *v, [](const std::string& k, const std::string& s) {
            return detail::parse_int<int>(k, s);
        });
    } else {
        spec.d_values = {spec.base.d, t_f};
    }
    std::sort(spec.d_values.begin(), spec.d_values.end());
    spec.d_values.erase(std::unique(spec.d_values.begin(), spec.d_values.end()), spec.d_values.end());
    if (auto* v = find("fills")) {
        spec.fills = detail::parse_list<FillStrategy>("fills", *v, [](const std::string&, const std::string& s) {
            try {
                return parse_fill_strategy(s);
            } catch (const InvalidArgument& e) {
                throw ConfigError(e.what());
            }
        });
    } else {
        spec.fills = {spec.base.fill};
    }
    if (auto* v = find("seeds")) {
        spec.seeds = detail::parse_list<std::uint64_t>(
            "seeds", *v, [](const std::string& k, const std::string& s) { return detail::parse_int<std::uint64_t>(k, s); });
    } else {
        spec.seeds = {spec.base.seed};
    }
    spec.reference_d = t_f;
    if (auto* v = find("reference_d")) spec.reference_d = detail::parse_int<int>("reference_d", *v);
    try {
        spec.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

struct SweepCell {
    ModelKind model = ModelKind::seir;
    int d = 0;
    FillStrategy fill = FillStrategy::linear;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double aofv = std::numeric_limits<double>::quiet_NaN();
    double rt_seconds = std::numeric_limits<double>::quiet_NaN();
    double aofv_ratio = std::numeric_limits<double>::quiet_NaN();
    double rt_ratio = std::numeric_limits<double>::quiet_NaN();
    RunReport report;
};

struct SweepSummaryRow {
    int d = 0;
    FillStrategy fill = FillStrategy::linear;
    int n_ok = 0;
    double median_aofv = 0.0;
    double median_rt_seconds = 0.0;
    double median_aofv_ratio = 0.0;
    double median_rt_ratio = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<SweepSummaryRow> summary;

    [[nodiscard]] bool all_ok() const {
        return std::all_of(cells.begin(), cells.end(), [](const SweepCell& c) { return c.ok; });
    }
    [[nodiscard]] const SweepSummaryRow* row(int d, FillStrategy fill) const {
        for (const auto& r : summary) {
            if (r.d == d && r.fill == fill) return &r;
        }
        return nullptr;
    }
};

/// Runs every (d, fill, seed) cell in that order. A failing cell is
/// recorded and the sweep moves on. Ratios divide by the reference_d cell
/// with the same fill and seed.
inline SweepResult sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    for (int d : spec.d_values) {
        for (auto fill : spec.fills) {
            for (auto seed : spec.seeds) {
                SweepCell cell;
                cell.model = spec.base.instance.kind;
                cell.d = d;
                cell.fill = fill;
                cell.seed = seed;
                OptimizerConfig cfg = spec.base;
                cfg.d = d;
                cfg.fill = fill;
                cfg.seed = seed;
                try {
                    cell.report = spec.baseline ? run_baseline_standard_bo(cfg) : run(cfg);
                    cell.aofv = cell.report.best_objective_full;
                    cell.rt_seconds = cell.report.wall_time;
                    cell.ok = true;
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
                result.cells.push_back(std::move(cell));
            }
        }
    }
    for (auto& cell : result.cells) {
        if (!cell.ok) continue;
        for (const auto& ref : result.cells) {
            if (ref.ok && ref.d == spec.reference_d && ref.fill == cell.fill && ref.seed == cell.seed) {
                if (ref.aofv > 0.0) cell.aofv_ratio = aofv_ratio(cell.aofv, ref.aofv);
                if (ref.rt_seconds > 0.0) cell.rt_ratio = rt_ratio(cell.rt_seconds, ref.rt_seconds);
            }
        }
    }
    for (int d : spec.d_values) {
        for (auto fill : spec.fills) {
            SweepSummaryRow row;
            row.d = d;
            row.fill = fill;
            std::vector<double> aofv, rt, ar, rr;
            for (const auto& c : result.cells) {
                if (c.d != d || c.fill != fill || !c.ok) continue;
                ++row.n_ok;
                aofv.push_back(c.aofv);
                rt.push_back(c.rt_seconds);
                ar.push_back(c.aofv_ratio);
                rr.push_back(c.rt_ratio);
            }
            row.median_aofv = median(aofv);
            row.median_rt_seconds = median(rt);
            row.median_aofv_ratio = median(ar);
            row.median_rt_ratio = median(rr);
            result.summary.push_back(row);
        }
    }
    return result;
}

namespace detail {
inline std::string csv_number(double v) { return std::isnan(v) ? std::string() : format_double(v); }
}  // namespace detail

/// Columns model,d,fill,seed,aofv,rt_seconds,aofv_ratio,rt_ratio; failed
/// cells leave the numeric fields empty.
inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << "model,d,fill,seed,aofv,rt_seconds,aofv_ratio,rt_ratio\n";
    for (const auto& c : r.cells) {
        os << to_string(c.model) << ',' << c.d << ',' << to_string(c.fill) << ',' << c.seed << ','
           << detail::csv_number(c.aofv) << ',' << detail::csv_number(c.rt_seconds) << ','
           << detail::csv_number(c.aofv_ratio) << ',' << detail::csv_number(c.rt_ratio) << '\n';
    }
}

inline void write_sweep_summary_csv(std::ostream& os, ModelKind model, const SweepResult& r) {
    os << "model,d,fill,n_ok,median_aofv,median_rt_seconds,median_aofv_ratio,median_rt_ratio\n";
    for (const auto& s : r.summary) {
        os << to_string(model) << ',' << s.d << ',' << to_string(s.fill) << ',' << s.n_ok << ','
           << detail::csv_number(s.median_aofv) << ',' << detail::csv_number(s.median_rt_seconds) << ','
           << detail::csv_number(s.median_aofv_ratio) << ',' << detail::csv_number(s.median_rt_ratio) << '\n';
    }
}

}  // namespace drdf
