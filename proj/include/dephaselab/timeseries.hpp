#ifndef DEPHASELAB_TIMESERIES_HPP
#define DEPHASELAB_TIMESERIES_HPP

// Evaluation of the full dephasing breakdown over a time grid.  The
// per-point work parallelizes over times (OpenMP kernel); a serial
// reference implementation is kept for testing, and both produce bitwise
// identical output.

#include "dephaselab/decoherence.hpp"
#include "dephaselab/qubit.hpp"
#include "dephaselab/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dephaselab {

struct TimeGrid {
    double t_min = 0.0;
    double t_max = 1.0;
    int points = 2;
    enum class Spacing { Linear, Log } spacing = Spacing::Linear;

    std::vector<double> times() const;
};

enum class MethodChoice { Auto, Closed, Quadrature };

Method resolve_method(MethodChoice choice, const BathSpec& bath);

struct EvaluationOptions {
    MethodChoice method = MethodChoice::Auto;
    DecoherenceTolerances tol{};
    bool parallel = true;
};

struct BreakdownSeries {
    std::vector<DephasingBreakdown> rows;
    /// |coherence| for the factorized initial condition with the same
    /// preparation; filled for correlated runs so the two can be compared.
    std::vector<double> abs_coherence_uncorrelated;
    bool has_uncorrelated_reference = false;
    /// For operator-list preparations gamma_corr is the artifact-defined
    /// effective value -ln|ratio(t)| (can be negative transiently).
    bool gamma_corr_is_effective = false;
};

BreakdownSeries evaluate_breakdown_grid(const QubitPreparation& prep,
                                        const BathSpec& bath,
                                        InitialStateKind kind,
                                        std::span<const double> times,
                                        const EvaluationOptions& opts = {});

/// Serial reference; bitwise identical to the parallel kernel.
BreakdownSeries evaluate_breakdown_grid_serial(const QubitPreparation& prep,
                                               const BathSpec& bath,
                                               InitialStateKind kind,
                                               std::span<const double> times,
                                               EvaluationOptions opts = {});

/// Strict interior extrema above a relative noise floor.
int count_extrema(std::span<const double> series, double rel_noise = 1e-9);

/// No decreasing step beyond the noise floor.
bool is_monotone_nondecreasing(std::span<const double> series,
                               double rel_noise = 1e-9);

/// Count of sign changes of the series itself (noise-floored).
int count_sign_changes(std::span<const double> series, double rel_noise = 1e-9);

} // namespace dephaselab

#endif
