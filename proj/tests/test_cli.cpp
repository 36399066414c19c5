#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dephaselab/scenario.hpp"

#include <algorithm>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <fstream>
#include <sstream>

using namespace dephaselab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir()
{
    static int counter = 0;
    const auto dir = fs::temp_directory_path() /
                     ("dephaselab_test_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const char* kBasicConfig = R"(# ohmic demo scenario
bath.s = 1.0
bath.lambda = 1.0
bath.omega_c = 1.0
bath.beta = 10
qubit.omega0 = 0.1
prep.kind = correlated
prep.a0 = 0.7071067811865476 0
prep.a1 = 0.7071067811865476 0
grid.t_min = 0.01
grid.t_max = 50
grid.points = 40
grid.spacing = log
output.stem = demo
)";

} // namespace

TEST_CASE("config parsing: values, comments, inf beta")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", kBasicConfig);
    const auto cfg = load_config(dir / "a.conf");
    CHECK(cfg.s == 1.0);
    CHECK(cfg.beta == 10.0);
    CHECK(cfg.points == 40);
    CHECK(cfg.stem == "demo");

    write_file(dir / "b.conf", "bath.beta = inf\n");
    CHECK(std::isinf(load_config(dir / "b.conf").beta));
}

TEST_CASE("config parsing: errors")
{
    const auto dir = temp_dir();
    write_file(dir / "bad1.conf", "bath.s = fast\n");
    CHECK_THROWS_AS(load_config(dir / "bad1.conf"), ConfigError);
    write_file(dir / "bad2.conf", "unknown.key = 1\n");
    CHECK_THROWS_AS(load_config(dir / "bad2.conf"), ConfigError);
    write_file(dir / "bad3.conf", "just a line\n");
    CHECK_THROWS_AS(load_config(dir / "bad3.conf"), ConfigError);
    write_file(dir / "bad4.conf", "grid.points = 1\n");
    CHECK_THROWS_AS(load_config(dir / "bad4.conf"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "does_not_exist.conf"), ConfigError);
}

TEST_CASE("environment overrides")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", kBasicConfig);
    ::setenv("DEPHASELAB_BATH__S", "2.5", 1);
    ::setenv("DEPHASELAB_GRID__POINTS", "17", 1);
    const auto cfg = load_config(dir / "a.conf");
    ::unsetenv("DEPHASELAB_BATH__S");
    ::unsetenv("DEPHASELAB_GRID__POINTS");
    CHECK(cfg.s == 2.5);
    CHECK(cfg.points == 17);
}

TEST_CASE("tau_b grid scaling")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf",
               "bath.beta = 31.41592653589793\ngrid.unit = tau_b\n"
               "grid.t_min = 0.1\ngrid.t_max = 5\ngrid.points = 5\n"
               "grid.spacing = linear\n");
    const auto cfg = load_config(dir / "a.conf");
    const auto times = make_times(cfg);
    // tau_B = beta/pi = 10, so the grid runs from 1 to 50
    CHECK(times.front() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(times.back() == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("run: files, header, determinism")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", kBasicConfig);
    const auto cfg = load_config(dir / "a.conf");

    const auto files = run_scenario(cfg, dir / "out");
    REQUIRE(files.size() == 2);
    const std::string csv = read_file(files[0]);
    CHECK(csv.rfind("t,gamma_vac,gamma_th,gamma_corr,phi,chi,gamma_total,"
                    "re_coherence,im_coherence,abs_coherence,bloch_norm,"
                    "entropy,abs_coherence_uncorrelated\n",
                    0) == 0);
    // header + one line per grid point, LF endings only
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 41);
    CHECK(csv.find('\r') == std::string::npos);

    // byte-identical rerun
    run_scenario(cfg, dir / "out2");
    CHECK(read_file(dir / "out2" / "demo.csv") == csv);

    // summary fields
    const auto j = nlohmann::json::parse(read_file(files[1]));
    CHECK(j["regime"]["ohmicity"] == "ohmic");
    CHECK(j["regime"]["decoherence"] == "complete");
    CHECK(j["limits"]["gamma_vac_inf"] == "inf");
    CHECK(j["labels"]["gamma_vac"] == "Monotonic increase");
    CHECK(j["labels"]["gamma_corr"] == "Peak structure");
    CHECK(j.contains("extrema_counts"));
}

TEST_CASE("run: degenerate preparation a1 = 0 gives a zero coherence column")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf",
               "prep.a0 = 1 0\nprep.a1 = 0 0\ngrid.points = 8\n"
               "output.stem = degen\n");
    const auto cfg = load_config(dir / "a.conf");
    const auto series =
        evaluate_breakdown_grid(make_preparation(cfg), make_bath(cfg),
                                initial_state_kind(cfg), make_times(cfg),
                                make_eval_options(cfg));
    for (const auto& r : series.rows)
        CHECK(std::abs(r.coherence) == 0.0);
}

TEST_CASE("run: uncorrelated preparation has no extra column")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", "prep.kind = uncorrelated\ngrid.points = 4\n");
    const auto cfg = load_config(dir / "a.conf");
    const auto files = run_scenario(cfg, dir / "out");
    const std::string csv = read_file(files[0]);
    CHECK(csv.find("abs_coherence_uncorrelated") == std::string::npos);
    CHECK(csv.find(",entropy\n") != std::string::npos);
}

TEST_CASE("sweep: naming, index, plateau zeros at even couplings")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", kBasicConfig);
    auto cfg = load_config(dir / "a.conf");
    cfg.points = 8;
    cfg.omega0 = 0.1; // beta omega0 = 1

    const auto files = sweep_scenario(cfg, SweepParameter::Lambda,
                                      {1.0, 2.0, 4.0}, dir / "sweep");
    CHECK(fs::exists(dir / "sweep" / "demo_lambda_1.csv"));
    CHECK(fs::exists(dir / "sweep" / "demo_lambda_2.csv"));
    CHECK(fs::exists(dir / "sweep" / "demo_lambda_4.csv"));
    CHECK(fs::exists(dir / "sweep" / "demo_index.json"));
    CHECK(files.size() == 7);

    const auto idx =
        nlohmann::json::parse(read_file(dir / "sweep" / "demo_index.json"));
    REQUIRE(idx["entries"].size() == 3);
    CHECK(idx["parameter"] == "lambda");
    // gamma_corr(inf) vanishes at lambda = 2 and 4
    CHECK(std::fabs(idx["entries"][1]["gamma_corr_inf"].get<double>()) <= 1e-6);
    CHECK(std::fabs(idx["entries"][2]["gamma_corr_inf"].get<double>()) <= 1e-6);
    CHECK(idx["entries"][0]["gamma_corr_inf"].get<double>() > 0.1);

    CHECK_THROWS_AS(sweep_scenario(cfg, SweepParameter::Lambda, {},
                                   dir / "sweep"),
                    ConfigError);
}

TEST_CASE("sweep: regime labels per s value")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", kBasicConfig);
    auto cfg = load_config(dir / "a.conf");
    cfg.points = 6;
    sweep_scenario(cfg, SweepParameter::S, {0.5, 1.0, 1.5, 3.0}, dir / "s");
    auto label = [&](const std::string& name) {
        return nlohmann::json::parse(read_file(dir / "s" / name));
    };
    CHECK(label("demo_s_0.5.json")["regime"]["ohmicity"] == "subohmic");
    CHECK(label("demo_s_0.5.json")["labels"]["gamma_corr"] == "Oscillations");
    CHECK(label("demo_s_1.json")["regime"]["ohmicity"] == "ohmic");
    CHECK(label("demo_s_1.5.json")["regime"]["decoherence"] == "complete");
    CHECK(label("demo_s_1.5.json")["labels"]["gamma_vac"] == "Saturation");
    CHECK(label("demo_s_3.json")["regime"]["decoherence"] == "incomplete");
    CHECK(label("demo_s_3.json")["labels"]["gamma_th"] == "Saturation");
}

TEST_CASE("run: operator-list preparation from a file")
{
    const auto dir = temp_dir();
    // a single projector operator |psi><psi| for the equal superposition
    write_file(dir / "ops.txt",
               "0.5 0  0.5 0  0.5 0  0.5 0\n");
    write_file(dir / "a.conf",
               "prep.kind = operators\nprep.operators = " +
                   (dir / "ops.txt").string() +
                   "\nqubit.omega0 = 0.1\ngrid.points = 6\n"
                   "output.stem = ops\n");
    const auto cfg = load_config(dir / "a.conf");
    const auto files = run_scenario(cfg, dir / "out");
    const std::string csv = read_file(files[0]);
    CHECK(csv.find("abs_coherence_uncorrelated") != std::string::npos);
    const auto j = nlohmann::json::parse(read_file(files[1]));
    CHECK(j["labels"].contains("gamma_corr_note"));

    // the single-projector operator list reproduces the projector run
    write_file(dir / "b.conf",
               "prep.kind = correlated\nqubit.omega0 = 0.1\n"
               "grid.points = 6\noutput.stem = proj\n");
    const auto cfg2 = load_config(dir / "b.conf");
    run_scenario(cfg2, dir / "out");
    const std::string csv2 = read_file(dir / "out" / "proj.csv");
    // identical numbers except the file-order of rounding; compare fields
    auto grab = [](const std::string& text, int row, int col) {
        std::istringstream is(text);
        std::string line;
        for (int i = 0; i <= row; ++i)
            std::getline(is, line);
        std::istringstream ls(line);
        std::string field;
        for (int c = 0; c <= col; ++c)
            std::getline(ls, field, ',');
        return std::stod(field);
    };
    for (int row = 1; row <= 6; ++row)
        for (int col : {1, 2, 3, 9}) // gamma_vac, gamma_th, gamma_corr, |coh|
            CHECK(grab(csv, row, col) ==
                  doctest::Approx(grab(csv2, row, col)).epsilon(1e-12));
}

TEST_CASE("run: tabulated cutoff through the config")
{
    const auto dir = temp_dir();
    std::ostringstream table;
    table << "0 1\n";
    for (int i = 0; i < 200; ++i) {
        const double x = 1e-3 * std::pow(45.0 / 1e-3, i / 199.0);
        table << x << " " << std::exp(-x) << "\n";
    }
    write_file(dir / "cut.csv", table.str());
    write_file(dir / "a.conf",
               "bath.cutoff = tabulated\nbath.cutoff_table = " +
                   (dir / "cut.csv").string() +
                   "\ngrid.points = 5\ngrid.t_max = 5\noutput.stem = tab\n");
    const auto cfg = load_config(dir / "a.conf");
    REQUIRE(make_bath(cfg).j.kind() == CutoffKind::Tabulated);
    const auto files = run_scenario(cfg, dir / "out");
    CHECK(fs::exists(files[0]));

    // sampled exponential cutoff stays close to the analytic one
    write_file(dir / "b.conf", "grid.points = 5\ngrid.t_max = 5\n"
                               "output.stem = expo\n");
    run_scenario(load_config(dir / "b.conf"), dir / "out");
    const auto a = read_file(dir / "out" / "tab.csv");
    const auto b = read_file(dir / "out" / "expo.csv");
    std::istringstream ia(a), ib(b);
    std::string la, lb;
    std::getline(ia, la);
    std::getline(ib, lb);
    while (std::getline(ia, la) && std::getline(ib, lb)) {
        const double va = std::stod(la.substr(la.find(',') + 1));
        const double vb = std::stod(lb.substr(lb.find(',') + 1));
        CHECK(va == doctest::Approx(vb).epsilon(1e-3));
    }

    write_file(dir / "c.conf", "bath.cutoff = tabulated\n"
                               "bath.cutoff_table = /nonexistent.csv\n");
    CHECK_THROWS_AS(make_bath(load_config(dir / "c.conf")), ConfigError);
}

TEST_CASE("grid starting at t = 0")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", "grid.t_min = 0\ngrid.t_max = 10\n"
                               "grid.points = 5\ngrid.spacing = linear\n"
                               "output.stem = zero\n");
    const auto cfg = load_config(dir / "a.conf");
    const auto series =
        evaluate_breakdown_grid(make_preparation(cfg), make_bath(cfg),
                                initial_state_kind(cfg), make_times(cfg),
                                make_eval_options(cfg));
    const auto& r0 = series.rows.front();
    CHECK(r0.t == 0.0);
    CHECK(r0.gamma_vac == 0.0);
    CHECK(r0.gamma_th == 0.0);
    CHECK(r0.gamma_corr == 0.0);
    CHECK(r0.phi == 0.0);
    CHECK(r0.chi == 0.0);
    CHECK(r0.gamma_total == 0.0);
    CHECK(std::abs(r0.coherence) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r0.bloch_norm == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r0.entropy <= 1e-12);
    // log spacing cannot start at zero
    write_file(dir / "b.conf", "grid.t_min = 0\ngrid.spacing = log\n");
    CHECK_THROWS(make_times(load_config(dir / "b.conf")));
}

TEST_CASE("omega-scaled grid")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", "bath.omega_c = 4\ngrid.unit = omega\n"
                               "grid.t_min = 2\ngrid.t_max = 8\n"
                               "grid.points = 4\ngrid.spacing = linear\n");
    const auto times = make_times(load_config(dir / "a.conf"));
    CHECK(times.front() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(times.back() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("validate: fast suite passes; under-resolved oracle fails")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", kBasicConfig);
    auto cfg = load_config(dir / "a.conf");
    cfg.validate_s = {1.0, 3.0}; // fast subset; full sweep in acceptance
    const auto report = validate_scenario(cfg);
    CHECK(report.all_pass);
    for (const auto& c : report.checks)
        CHECK((c.pass || c.skipped));

    cfg.discrete_modes = 10; // deliberately under-resolved
    const auto bad = validate_scenario(cfg);
    CHECK_FALSE(bad.all_pass);
    bool discrete_failed = false;
    for (const auto& c : bad.checks)
        if (c.name.find("discrete") != std::string::npos && !c.pass) {
            discrete_failed = true;
            CHECK(c.max_rel_err > c.tol);
        }
    CHECK(discrete_failed);
}

TEST_CASE("validate: zero-temperature path skips thermal checks")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", "bath.beta = inf\n");
    auto cfg = load_config(dir / "a.conf");
    cfg.validate_s = {1.0};
    const auto report = validate_scenario(cfg);
    CHECK(report.all_pass);
    bool saw_skip = false;
    for (const auto& c : report.checks)
        if (c.name.find("gamma_th") != std::string::npos)
            saw_skip = c.skipped;
    CHECK(saw_skip);
}

TEST_CASE("limits report")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", "bath.s = 3\nbath.beta = 10\n");
    const auto cfg = load_config(dir / "a.conf");
    const auto j = limits_report(cfg);
    CHECK(j["limits"]["gamma_vac_inf"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["limits"]["gamma_th_inf"].get<double>() ==
          doctest::Approx(0.028665983015855176).epsilon(1e-10));
    CHECK(j["bounds"]["vac"].get<double>() ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["regime"]["decoherence"] == "incomplete");
}

#ifdef DEPHASELAB_CLI_PATH
TEST_CASE("CLI subprocess: run and validate exit codes")
{
    const auto dir = temp_dir();
    write_file(dir / "a.conf", kBasicConfig);

    auto shell = [&](const std::string& cmd) {
        const int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    };
    const std::string bin = DEPHASELAB_CLI_PATH;

    CHECK(shell(bin + " run --config " + (dir / "a.conf").string() +
                " --out " + (dir / "out").string() + " > /dev/null") == 0);
    CHECK(fs::exists(dir / "out" / "demo.csv"));

    // parse error -> 2
    CHECK(shell(bin + " run --config " + (dir / "missing.conf").string() +
                " --out " + dir.string() + " 2> /dev/null") == 2);
    // usage error -> 2
    CHECK(shell(bin + " bogus 2> /dev/null") == 2);

    // fast validation on one s value
    write_file(dir / "v.conf",
               std::string(kBasicConfig) + "validate.s_values = 1\n");
    CHECK(shell(bin + " validate --config " + (dir / "v.conf").string() +
                " --out " + (dir / "v").string() + " > /dev/null") == 0);

    // under-resolved oracle -> 1
    write_file(dir / "v10.conf", std::string(kBasicConfig) +
                                     "validate.s_values = 1\n"
                                     "validate.discrete_modes = 10\n");
    CHECK(shell(bin + " validate --config " + (dir / "v10.conf").string() +
                " --out " + (dir / "v10").string() + " > /dev/null") == 1);

    // limits prints JSON to stdout
    CHECK(shell(bin + " limits --config " + (dir / "a.conf").string() +
                " > " + (dir / "lim.json").string()) == 0);
    const auto j = nlohmann::json::parse(read_file(dir / "lim.json"));
    CHECK(j.contains("limits"));

    // unreachable quadrature tolerance -> numerical non-convergence -> 3
    write_file(dir / "nc.conf", std::string(kBasicConfig) +
                                    "method = quadrature\n"
                                    "tol.quad_rel = 1e-30\n"
                                    "grid.points = 2\n");
    CHECK(shell(bin + " run --config " + (dir / "nc.conf").string() +
                " --out " + (dir / "nc").string() + " 2> /dev/null") == 3);

    // identical bytes for any worker count
    CHECK(shell(bin + " run --config " + (dir / "a.conf").string() +
                " --workers 1 --out " + (dir / "w1").string() +
                " > /dev/null") == 0);
    CHECK(shell(bin + " run --config " + (dir / "a.conf").string() +
                " --workers 2 --out " + (dir / "w2").string() +
                " > /dev/null") == 0);
    CHECK(read_file(dir / "w1" / "demo.csv") ==
          read_file(dir / "w2" / "demo.csv"));
}
#endif
