#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "drdf/app.hpp"

int main(int argc, char** argv) {
    CLI::App cli{"Dimension-reduced Bayesian optimization of epidemic control strategies"};
    cli.require_subcommand(1);

    drdf::app::Options opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", opts.seed, "random seed");
        sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
        sub->add_option("--d", opts.d, "reduced dimension");
        sub->add_option("--fill", opts.fill, "fill-in strategy")
            ->check(CLI::IsMember({"identical", "uniform", "linear", "normal", "gp"}));
        sub->add_option("--model", opts.model, "epidemic model")->check(CLI::IsMember({"seir", "sis"}));
        sub->add_option("--iterations", opts.iterations, "optimization iterations");
        sub->add_flag("--baseline", opts.baseline, "run the standard BO comparison arm");
    };

    auto* optimize = cli.add_subcommand("optimize", "single optimization run");
    add_common(optimize);
    auto* sweep = cli.add_subcommand("sweep", "grid over d, fill strategy and seed");
    add_common(sweep);
    auto* simulate = cli.add_subcommand("simulate", "trajectory of a given control");
    add_common(simulate);
    simulate->add_option("--control", opts.control_path, "file with t_f control values")->check(CLI::ExistingFile);
    auto* baseline = cli.add_subcommand("baseline", "standard BO comparison run");
    add_common(baseline);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : drdf::app::kConfigError;
    }

    try {
        if (*optimize) return drdf::app::optimize(opts);
        if (*baseline) {
            opts.baseline = true;
            return drdf::app::optimize(opts);
        }
        if (*sweep) return drdf::app::sweep(opts);
        if (*simulate) return drdf::app::simulate_command(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return drdf::app::kRunFailure;
    }
    return drdf::app::kConfigError;
}
