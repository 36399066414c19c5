// Command-line front end: run / sweep / validate / limits.
//
// Exit codes: 0 ok, 1 validation failure, 2 config or usage error,
// 3 numerical non-convergence, 4 I/O error.

#include "dephaselab/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;
    std::string tol_profile;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_out)
{
    cmd->add_option("--config", args.config_path, "scenario config file")
        ->required();
    if (needs_out)
        cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--workers", args.workers,
                    "worker threads (0 = runtime default)");
    cmd->add_option("--tol-profile", args.tol_profile,
                    "tolerance profile: fast | strict");
}

dephaselab::ScenarioConfig load(const CommonArgs& args)
{
    auto cfg = dephaselab::load_config(args.config_path);
    if (!args.tol_profile.empty())
        dephaselab::apply_tol_profile(cfg, args.tol_profile);
    if (args.workers > 0)
        cfg.workers = args.workers;
#ifdef _OPENMP
    if (cfg.workers > 0)
        omp_set_num_threads(cfg.workers);
#endif
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dephaselab: exact dephasing dynamics of a qubit in a "
                 "bosonic bath"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, validate_args, limits_args;
    std::string sweep_param;
    std::vector<double> sweep_values;

    CLI::App* run = app.add_subcommand("run", "emit a time series + summary");
    add_common(run, run_args, true);

    CLI::App* sweep =
        app.add_subcommand("sweep", "one series per parameter value");
    add_common(sweep, sweep_args, true);
    sweep->add_option("--param", sweep_param, "lambda | s | beta")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")
        ->required()
        ->delimiter(',');

    CLI::App* validate = app.add_subcommand(
        "validate", "closed vs quadrature vs discrete cross-checks");
    add_common(validate, validate_args, true);

    CLI::App* limits =
        app.add_subcommand("limits", "print long-time limits and bounds");
    add_common(limits, limits_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) {
            const auto cfg = load(run_args);
            const auto files =
                dephaselab::run_scenario(cfg, run_args.out_dir);
            for (const auto& f : files)
                std::cout << f.string() << "\n";
        } else if (sweep->parsed()) {
            const auto cfg = load(sweep_args);
            const auto files = dephaselab::sweep_scenario(
                cfg, dephaselab::parse_sweep_parameter(sweep_param),
                sweep_values, sweep_args.out_dir);
            for (const auto& f : files)
                std::cout << f.string() << "\n";
        } else if (validate->parsed()) {
            const auto cfg = load(validate_args);
            const auto report = dephaselab::validate_scenario(cfg);
            const auto j = report.to_json();
            std::filesystem::create_directories(validate_args.out_dir);
            const auto path = std::filesystem::path(validate_args.out_dir) /
                              (cfg.stem + "_validation.json");
            std::ofstream out(path, std::ios::binary);
            out << j.dump(2) << "\n";
            std::cout << j.dump(2) << std::endl;
            if (!report.all_pass)
                return 1;
        } else if (limits->parsed()) {
            const auto cfg = load(limits_args);
            std::cout << dephaselab::limits_report(cfg).dump(2) << std::endl;
        }
    } catch (const dephaselab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dephaselab::NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const dephaselab::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
