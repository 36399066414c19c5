#ifndef DEPHASELAB_CONFIG_HPP
#define DEPHASELAB_CONFIG_HPP

// Scenario configuration: flat key = value text with dotted sections,
// environment-variable overrides, and builders for the physical objects.
//
// Environment overrides: DEPHASELAB_<KEY> with "__" in place of ".", e.g.
// DEPHASELAB_BATH__S=2 overrides "bath.s".

#include "dephaselab/qubit.hpp"
#include "dephaselab/spectral.hpp"
#include "dephaselab/timeseries.hpp"

#include <complex>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dephaselab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    // bath
    double s = 1.0;
    double lambda = 1.0;
    double omega_c = 1.0;
    double beta = 10.0; // +inf encodes zero temperature ("inf" in the file)
    std::string cutoff = "exponential"; // exponential | tabulated
    std::string cutoff_table;           // CSV of x,F rows when tabulated
    double cutoff_tail_threshold = 1e-6;

    // qubit + preparation
    double omega0 = 1.0;
    std::string prep_kind = "correlated"; // correlated | uncorrelated | operators
    std::complex<double> a0{0.7071067811865476, 0.0};
    std::complex<double> a1{0.7071067811865476, 0.0};
    std::string operators_file; // one 2x2 matrix per 4 "re im" pairs

    // time grid
    double t_min = 0.01;
    double t_max = 100.0;
    int points = 200;
    std::string spacing = "log";  // linear | log
    std::string unit = "absolute"; // absolute | omega | tau_b

    // numerics
    std::string method = "auto"; // auto | closed | quadrature
    double quad_rel = 1e-10;
    double series_rel = 1e-10;
    long series_k_max = 1000000;

    // validation suite
    std::vector<double> validate_s{0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
    int discrete_modes = 2000;
    double closed_vs_quad_tol_vac = 1e-8;
    double closed_vs_quad_tol_th = 1e-7;
    double discrete_tol = 1e-3;

    // output
    std::string stem = "scenario";
    int workers = 0; // 0 = runtime default
    double label_noise_floor = 1e-9;
};

/// Parse a config file (key = value, '#' comments) and apply environment
/// overrides.  Unknown keys raise ConfigError.
ScenarioConfig load_config(const std::filesystem::path& file);

/// Parse from an in-memory map (used by load_config and tests).
ScenarioConfig config_from_map(const std::map<std::string, std::string>& kv);

/// Apply DEPHASELAB_* environment overrides onto a raw key/value map.
void apply_env_overrides(std::map<std::string, std::string>& kv);

BathSpec make_bath(const ScenarioConfig& cfg);
QubitPreparation make_preparation(const ScenarioConfig& cfg);
InitialStateKind initial_state_kind(const ScenarioConfig& cfg);
std::vector<double> make_times(const ScenarioConfig& cfg);
EvaluationOptions make_eval_options(const ScenarioConfig& cfg);

/// "fast" loosens the quadrature/series tolerances for exploration,
/// "strict" restores the defaults.
void apply_tol_profile(ScenarioConfig& cfg, const std::string& profile);

} // namespace dephaselab

#endif
