#ifndef DEPHASELAB_NUMERICS_HPP
#define DEPHASELAB_NUMERICS_HPP

// Generic numerical engines: adaptive Gauss-Kronrod quadrature on finite and
// semi-infinite intervals (with half-period splitting and tail acceleration
// for oscillatory integrands), series summation with an Euler-Maclaurin tail
// correction, and an Abel-regularized long-time-limit estimator.
//
// All engines are stateless and deterministic for fixed tolerances.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dephaselab {

struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Series summation hit k_max before reaching the requested tolerance.
struct TruncationError : NonConvergenceError {
    using NonConvergenceError::NonConvergenceError;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int segments_used = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    /// Period of an oscillatory factor of the integrand (e.g. 2*pi/t for
    /// cos(w t)); segments are split at half-period boundaries.
    std::optional<double> oscillation_period{};
    /// Point beyond which the integrand is negligible.  Auto-detected by
    /// probing geometric scales when absent.
    std::optional<double> upper_cutoff{};
    int max_segments = 30000;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
/// `breakpoints` seeds the initial segmentation (values outside (a,b) are
/// ignored).  Throws NonConvergenceError if the segment budget is exhausted
/// far from tolerance, or if f returns a non-finite value.
QuadratureResult integrate_finite(const std::function<double(double)>& f,
                                  double a, double b,
                                  double rel_tol = 1e-10,
                                  double abs_tol = 1e-300,
                                  std::span<const double> breakpoints = {},
                                  int max_segments = 30000);

/// Integral of f over [0, inf).  The caller's cutoff must make f decay;
/// oscillatory integrands are handled per QuadratureOptions.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         const QuadratureOptions& opts = {});

struct SeriesResult {
    double value = 0.0;
    double tail_bound = 0.0;
    long terms_used = 0;
};

/// Sum of term(k) for k = 1, 2, ... where term is smooth in k and
/// eventually monotone-decreasing in magnitude.  A partial sum is corrected
/// by the Euler-Maclaurin tail (integral-comparison bound); returns once the
/// residual bound drops below rel_tol * |sum|.  Throws TruncationError if
/// k_max terms do not suffice.
SeriesResult sum_series(const std::function<double(double)>& term,
                        double rel_tol = 1e-10, long k_max = 1000000);

struct AbelLimitResult {
    double limit = 0.0;
    bool converged = false;
    /// eps * integral_0^inf e^{-eps t} f(t) dt per requested eps.
    std::vector<double> values;
    /// Diagonal of the iterated-Aitken extrapolation table.
    std::vector<double> extrapolated;
};

/// Abel-regularized limit of f(t) as t -> inf, evaluated on a decreasing
/// eps sequence and extrapolated.  Non-convergence is reported through the
/// `converged` flag, not an exception.
AbelLimitResult abel_limit(const std::function<double(double)>& f,
                           std::span<const double> eps_sequence,
                           double quad_rel_tol = 1e-10);

/// Default eps sequence 0.05 * 2^{-j}, j = 0..7.
std::vector<double> default_abel_eps();

/// Fixed-tree pairwise summation; bitwise deterministic for a given input
/// order regardless of threading in the caller.
double pairwise_sum(std::span<const double> values);

} // namespace dephaselab

#endif
