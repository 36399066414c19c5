#include "dephaselab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

extern char** environ;

namespace dephaselab {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_double(const std::string& key, const std::string& v)
{
    const std::string lv = lower(trim(v));
    if (lv == "inf" || lv == "+inf" || lv == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty())
            return d;
    } catch (...) {
    }
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v +
                      "'");
}

long parse_long(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (trim(v.substr(pos)).empty())
            return d;
    } catch (...) {
    }
    throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                      v + "'");
}

std::complex<double> parse_complex(const std::string& key,
                                   const std::string& v)
{
    std::istringstream is(v);
    double re = 0.0, im = 0.0;
    if (is >> re) {
        if (!(is >> im))
            im = 0.0;
        return {re, im};
    }
    throw ConfigError("config: key '" + key + "' expects 're [im]', got '" +
                      v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(parse_double(key, item));
    }
    if (out.empty())
        throw ConfigError("config: key '" + key + "' expects a value list");
    return out;
}

} // namespace

void apply_env_overrides(std::map<std::string, std::string>& kv)
{
    constexpr const char* prefix = "DEPHASELAB_";
    for (char** e = environ; e && *e; ++e) {
        const std::string entry(*e);
        if (entry.rfind(prefix, 0) != 0)
            continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            continue;
        std::string key = lower(entry.substr(std::strlen(prefix),
                                             eq - std::strlen(prefix)));
        std::size_t pos;
        while ((pos = key.find("__")) != std::string::npos)
            key.replace(pos, 2, ".");
        kv[key] = entry.substr(eq + 1);
    }
}

ScenarioConfig config_from_map(const std::map<std::string, std::string>& kv)
{
    ScenarioConfig c;
    for (const auto& [key, value] : kv) {
        if (key == "bath.s") c.s = parse_double(key, value);
        else if (key == "bath.lambda") c.lambda = parse_double(key, value);
        else if (key == "bath.omega_c") c.omega_c = parse_double(key, value);
        else if (key == "bath.beta") c.beta = parse_double(key, value);
        else if (key == "bath.cutoff") c.cutoff = lower(trim(value));
        else if (key == "bath.cutoff_table") c.cutoff_table = trim(value);
        else if (key == "bath.cutoff_tail_threshold")
            c.cutoff_tail_threshold = parse_double(key, value);
        else if (key == "qubit.omega0") c.omega0 = parse_double(key, value);
        else if (key == "prep.kind") c.prep_kind = lower(trim(value));
        else if (key == "prep.a0") c.a0 = parse_complex(key, value);
        else if (key == "prep.a1") c.a1 = parse_complex(key, value);
        else if (key == "prep.operators") c.operators_file = trim(value);
        else if (key == "grid.t_min") c.t_min = parse_double(key, value);
        else if (key == "grid.t_max") c.t_max = parse_double(key, value);
        else if (key == "grid.points")
            c.points = static_cast<int>(parse_long(key, value));
        else if (key == "grid.spacing") c.spacing = lower(trim(value));
        else if (key == "grid.unit") c.unit = lower(trim(value));
        else if (key == "method") c.method = lower(trim(value));
        else if (key == "tol.quad_rel") c.quad_rel = parse_double(key, value);
        else if (key == "tol.series_rel")
            c.series_rel = parse_double(key, value);
        else if (key == "tol.series_k_max")
            c.series_k_max = parse_long(key, value);
        else if (key == "validate.s_values")
            c.validate_s = parse_list(key, value);
        else if (key == "validate.discrete_modes")
            c.discrete_modes = static_cast<int>(parse_long(key, value));
        else if (key == "validate.tol_vac")
            c.closed_vs_quad_tol_vac = parse_double(key, value);
        else if (key == "validate.tol_th")
            c.closed_vs_quad_tol_th = parse_double(key, value);
        else if (key == "validate.tol_discrete")
            c.discrete_tol = parse_double(key, value);
        else if (key == "output.stem") c.stem = trim(value);
        else if (key == "output.label_noise_floor")
            c.label_noise_floor = parse_double(key, value);
        else if (key == "workers")
            c.workers = static_cast<int>(parse_long(key, value));
        else
            throw ConfigError("config: unknown key '" + key + "'");
    }

    if (c.points < 2)
        throw ConfigError("config: grid.points must be >= 2");
    if (!(c.t_min >= 0.0) || !(c.t_max > c.t_min))
        throw ConfigError("config: require 0 <= grid.t_min < grid.t_max");
    if (c.spacing != "linear" && c.spacing != "log")
        throw ConfigError("config: grid.spacing must be linear or log");
    if (c.unit != "absolute" && c.unit != "omega" && c.unit != "tau_b")
        throw ConfigError("config: grid.unit must be absolute, omega or tau_b");
    if (c.cutoff != "exponential" && c.cutoff != "tabulated")
        throw ConfigError("config: bath.cutoff must be exponential or tabulated");
    if (c.prep_kind != "correlated" && c.prep_kind != "uncorrelated" &&
        c.prep_kind != "operators")
        throw ConfigError(
            "config: prep.kind must be correlated, uncorrelated or operators");
    if (c.method != "auto" && c.method != "closed" && c.method != "quadrature")
        throw ConfigError("config: method must be auto, closed or quadrature");
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw ConfigError("config: cannot open '" + file.string() + "'");

    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not 'key = value'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: empty key on line " +
                              std::to_string(lineno));
        kv[key] = value;
    }
    apply_env_overrides(kv);
    return config_from_map(kv);
}

BathSpec make_bath(const ScenarioConfig& cfg)
{
    if (cfg.cutoff == "exponential")
        return BathSpec(SpectralDensity::exponential(cfg.lambda, cfg.s,
                                                     cfg.omega_c),
                        cfg.beta);

    std::ifstream in(cfg.cutoff_table);
    if (!in)
        throw ConfigError("config: cannot open cutoff table '" +
                          cfg.cutoff_table + "'");
    std::vector<double> x, f;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        double xv, fv;
        if (!(is >> xv >> fv))
            throw ConfigError("config: bad cutoff table row '" + line + "'");
        x.push_back(xv);
        f.push_back(fv);
    }
    try {
        return BathSpec(SpectralDensity::tabulated(cfg.lambda, cfg.s,
                                                   cfg.omega_c, x, f,
                                                   cfg.cutoff_tail_threshold),
                        cfg.beta);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: invalid cutoff table: ") +
                          e.what());
    }
}

QubitPreparation make_preparation(const ScenarioConfig& cfg)
{
    if (cfg.prep_kind == "operators") {
        std::ifstream in(cfg.operators_file);
        if (!in)
            throw ConfigError("config: cannot open operators file '" +
                              cfg.operators_file + "'");
        OperatorList list;
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#')
                continue;
            std::istringstream is(line);
            Mat2 op;
            double re, im;
            for (int i = 0; i < 4; ++i) {
                if (!(is >> re >> im))
                    throw ConfigError(
                        "config: operator rows need 4 're im' pairs");
                op[i] = {re, im};
            }
            list.ops.push_back(op);
        }
        if (list.ops.empty())
            throw ConfigError("config: empty operators file");
        return QubitPreparation(std::move(list), cfg.omega0);
    }

    std::complex<double> a0 = cfg.a0, a1 = cfg.a1;
    const double n = std::sqrt(std::norm(a0) + std::norm(a1));
    if (!(n > 0.0))
        throw ConfigError("config: amplitudes must not both vanish");
    a0 /= n; // accept unnormalized input
    a1 /= n;
    return QubitPreparation(PureProjector{a0, a1}, cfg.omega0);
}

InitialStateKind initial_state_kind(const ScenarioConfig& cfg)
{
    return cfg.prep_kind == "uncorrelated" ? InitialStateKind::Uncorrelated
                                           : InitialStateKind::Correlated;
}

std::vector<double> make_times(const ScenarioConfig& cfg)
{
    double scale = 1.0;
    if (cfg.unit == "omega") {
        scale = 1.0 / cfg.omega_c; // grid values are Omega * t
    } else if (cfg.unit == "tau_b") {
        if (std::isinf(cfg.beta))
            throw ConfigError("config: tau_b grid needs a finite beta");
        scale = cfg.beta / 3.14159265358979323846; // grid values are t/tau_B
    }
    TimeGrid grid;
    grid.t_min = cfg.t_min * scale;
    grid.t_max = cfg.t_max * scale;
    grid.points = cfg.points;
    grid.spacing = (cfg.spacing == "log") ? TimeGrid::Spacing::Log
                                          : TimeGrid::Spacing::Linear;
    return grid.times();
}

EvaluationOptions make_eval_options(const ScenarioConfig& cfg)
{
    EvaluationOptions o;
    if (cfg.method == "closed")
        o.method = MethodChoice::Closed;
    else if (cfg.method == "quadrature")
        o.method = MethodChoice::Quadrature;
    o.tol.quad_rel = cfg.quad_rel;
    o.tol.series_rel = cfg.series_rel;
    o.tol.series_k_max = cfg.series_k_max;
    return o;
}

void apply_tol_profile(ScenarioConfig& cfg, const std::string& profile)
{
    if (profile == "fast") {
        cfg.quad_rel = 1e-7;
        cfg.series_rel = 1e-7;
    } else if (profile == "strict") {
        cfg.quad_rel = 1e-10;
        cfg.series_rel = 1e-10;
    } else {
        throw ConfigError("tol-profile must be 'fast' or 'strict'");
    }
}

} // namespace dephaselab
