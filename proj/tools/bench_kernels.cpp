// Serial vs OpenMP comparison for the two data-parallel kernels: the
// discrete-bath mode sums and the continuum breakdown grid.  Verifies that
// the parallel output is bitwise identical to the serial reference.

#include "dephaselab/discrete_bath.hpp"
#include "dephaselab/timeseries.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace dephaselab;

namespace {

double now_ms()
{
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(
               clock::now().time_since_epoch())
        .count();
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b)
{
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    TimeGrid g;
    g.t_min = lo;
    g.t_max = hi;
    g.points = n;
    g.spacing = TimeGrid::Spacing::Log;
    return g.times();
}

} // namespace

int main(int argc, char** argv)
{
    int modes = 4000;
    int grid_points = 4000;
    if (argc > 1)
        modes = std::atoi(argv[1]);
    if (argc > 2)
        grid_points = std::atoi(argv[2]);

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both paths run serially\n");
#endif

    const auto j = SpectralDensity::exponential(1.0, 1.0, 1.0);
    const BathSpec bath(j, 10.0);
    const auto times = log_grid(1e-2, 20.0, grid_points);

    // --- discrete-bath mode sums ------------------------------------
    const DiscreteBath dbath =
        discretize(j, modes, default_discretization_cutoff(j));

    double t0 = now_ms();
    const auto serial = gamma_discrete_grid_serial(dbath, bath.beta, times);
    double t1 = now_ms();
    const auto parallel = gamma_discrete_grid(dbath, bath.beta, times, true);
    double t2 = now_ms();

    std::printf("discrete gamma grid (%d modes x %d times):\n", modes,
                grid_points);
    std::printf("  serial   %8.1f ms\n", t1 - t0);
    std::printf("  openmp   %8.1f ms   speedup %.2fx   bitwise %s\n", t2 - t1,
                (t1 - t0) / std::max(t2 - t1, 1e-9),
                bitwise_equal(serial, parallel) ? "EQUAL" : "DIFFER");

    // --- continuum breakdown grid ------------------------------------
    const QubitPreparation prep(
        PureProjector{{0.7071067811865476, 0.0}, {0.7071067811865476, 0.0}},
        0.1);
    const auto small_times = log_grid(1e-2, 20.0, grid_points / 4);

    EvaluationOptions opts;
    opts.parallel = false;
    t0 = now_ms();
    const auto ser = evaluate_breakdown_grid(
        prep, bath, InitialStateKind::Correlated, small_times, opts);
    t1 = now_ms();
    opts.parallel = true;
    const auto par = evaluate_breakdown_grid(
        prep, bath, InitialStateKind::Correlated, small_times, opts);
    t2 = now_ms();

    bool equal = ser.rows.size() == par.rows.size();
    for (std::size_t i = 0; equal && i < ser.rows.size(); ++i)
        equal = std::memcmp(&ser.rows[i], &par.rows[i],
                            sizeof(DephasingBreakdown)) == 0;

    std::printf("breakdown grid (%zu times, closed forms):\n",
                small_times.size());
    std::printf("  serial   %8.1f ms\n", t1 - t0);
    std::printf("  openmp   %8.1f ms   speedup %.2fx   bitwise %s\n", t2 - t1,
                (t1 - t0) / std::max(t2 - t1, 1e-9),
                equal ? "EQUAL" : "DIFFER");

    return 0;
}
