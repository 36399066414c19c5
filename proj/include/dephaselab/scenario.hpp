#ifndef DEPHASELAB_SCENARIO_HPP
#define DEPHASELAB_SCENARIO_HPP

// Batch drivers behind the CLI subcommands: time-series runs, parameter
// sweeps, the cross-validation suite, and the limits report.
//
// File conventions: CSV with a fixed column order, 17 significant digits,
// "inf" for flagged infinities, LF line endings; JSON summaries encode
// infinities as the string "inf" and missing limits as "no_limit".

#include "dephaselab/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace dephaselab {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluate the scenario and write <stem>.csv and <stem>.json under out_dir.
/// Returns the paths written.
std::vector<std::filesystem::path>
run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

enum class SweepParameter { Lambda, S, Beta };

SweepParameter parse_sweep_parameter(const std::string& name);

/// One run per value, files <stem>_<param>_<value>.csv/.json, plus a
/// combined <stem>_index.json.  Throws ConfigError on an empty value list.
std::vector<std::filesystem::path>
sweep_scenario(const ScenarioConfig& cfg, SweepParameter param,
               const std::vector<double>& values,
               const std::filesystem::path& out_dir);

struct ValidationCheck {
    std::string name;
    double s = 0.0;
    double max_rel_err = 0.0;
    double tol = 0.0;
    bool pass = false;
    bool skipped = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass = true;
    nlohmann::json to_json() const;
};

/// Cross-validation suite: closed vs quadrature (gamma_vac, Phi, gamma_th)
/// and discrete-bath vs continuum, per configured s value.
ValidationReport validate_scenario(const ScenarioConfig& cfg);

/// Long-time limits, boundedness integrals, regime classification and the
/// qualitative labels, as a JSON document.
nlohmann::json limits_report(const ScenarioConfig& cfg);

/// Summary JSON for an evaluated series (regime, limits, bounds, extrema
/// counts, labels).
nlohmann::json summarize_series(const ScenarioConfig& cfg,
                                const BreakdownSeries& series);

/// CSV emission (stable column order, deterministic bytes).
void write_series_csv(const BreakdownSeries& series,
                      const std::filesystem::path& file);

} // namespace dephaselab

#endif
