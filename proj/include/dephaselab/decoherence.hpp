#ifndef DEPHASELAB_DECOHERENCE_HPP
#define DEPHASELAB_DECOHERENCE_HPP

// Scalar decoherence functions of time: vacuum, thermal, and correlation
// contributions, the bath phase function Phi, the phase shift chi, the
// thermal derivative, long-time limits and boundedness integrals.  Each
// dynamical quantity has a closed-form path (exponential cutoff) and a
// quadrature path (any cutoff).
//
// All functions are pure; grid evaluation parallelizes over time points.

#include "dephaselab/numerics.hpp"
#include "dephaselab/spectral.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace dephaselab {

enum class Method { Closed, Quadrature, LowTemp };

struct DecoherenceTolerances {
    double quad_rel = 1e-10;
    double quad_abs = 1e-300;
    double series_rel = 1e-10;
    long series_k_max = 1000000;
};

/// Vacuum contribution  int_0^inf J(w) (1 - cos wt)/w^2 dw.
/// Closed form requires the exponential cutoff.
double gamma_vac(const BathSpec& bath, double t, Method method,
                 const DecoherenceTolerances& tol = {});

/// Thermal contribution  2 int_0^inf J(w)/(e^{beta w}-1) (1 - cos wt)/w^2 dw.
/// Method::LowTemp is the ohmic lambda ln[sinh(t/tau_B)/(t/tau_B)] form and
/// requires Omega*beta >= 10 (see low_temp_is_marginal for the < 50 warning).
double gamma_th(const BathSpec& bath, double t, Method method,
                const DecoherenceTolerances& tol = {});

/// True when the low-temperature form is allowed but marginal
/// (10 <= Omega*beta < 50).
bool low_temp_is_marginal(const BathSpec& bath);

/// Bath phase function  Phi(t) = int_0^inf J(w) sin(wt)/w^2 dw.
double phi(const BathSpec& bath, double t, Method method,
           const DecoherenceTolerances& tol = {});

/// d(gamma_th)/dt = 2 int_0^inf J(w)/(e^{beta w}-1) sin(wt)/w dw;
/// the closed-form series holds for every s > 0.
double dgamma_th_dt(const BathSpec& bath, double t, Method method,
                    const DecoherenceTolerances& tol = {});

/// Initial-state data entering the correlation contribution:
/// m = <sigma_3>, a = beta*omega_0/2 (may be +inf), and the phase-shift
/// slope kappa = (sinh a - m cosh a)/(cosh a - m sinh a).
struct CorrelationContext {
    double m = 0.0;
    double a = 0.0;
    double kappa = 0.0;

    CorrelationContext(double m_, double a_);
};

/// gamma_corr = -1/2 ln[1 - (1-m^2) sin^2(Phi) / (cosh a - m sinh a)^2].
/// Returns +inf (a flagged, physical value: the coherence vanishes exactly)
/// when the logarithm argument underflows to zero.
double gamma_corr(const CorrelationContext& ctx, double phi_value);

/// cos(Phi) + i kappa sin(Phi); the correlated coherence is the uncorrelated
/// one times this factor.
std::complex<double> correlated_ratio(const CorrelationContext& ctx,
                                      double phi_value);

/// Continuous unwrapping of arg[cos Phi + i kappa sin Phi] along a
/// time-ordered Phi series starting at Phi(0) = 0.  Satisfies
/// tan(chi) = kappa tan(Phi) wherever cos(Phi) != 0.  For kappa = 0 the
/// trajectory passes through the origin and chi is taken identically zero.
std::vector<double> chi(const CorrelationContext& ctx,
                        std::span<const double> phi_series);

struct LimitValue {
    enum class Kind { Finite, Infinite, NoLimit } kind = Kind::Finite;
    double value = 0.0;

    static LimitValue finite(double v) { return {Kind::Finite, v}; }
    static LimitValue infinite() { return {Kind::Infinite, 0.0}; }
    static LimitValue none() { return {Kind::NoLimit, 0.0}; }
    bool is_finite() const { return kind == Kind::Finite; }
};

struct LongTimeLimits {
    LimitValue gamma_vac_inf;
    LimitValue gamma_th_inf;
    LimitValue phi_inf;
    /// Present only when a CorrelationContext is supplied.
    std::optional<LimitValue> gamma_corr_inf;
};

LongTimeLimits long_time_limits(
    const BathSpec& bath,
    const std::optional<CorrelationContext>& ctx = std::nullopt,
    const DecoherenceTolerances& tol = {});

/// Boundedness integrals: vac_bound = 2 int J/w^2, th_bound = 4 int
/// J/[w^2 (e^{beta w}-1)]; +inf when the integral diverges at the origin.
struct SufficiencyBounds {
    double vac_bound = 0.0;
    double th_bound = 0.0;
};

SufficiencyBounds sufficiency_bounds(const BathSpec& bath,
                                     const DecoherenceTolerances& tol = {});

/// Per-time record of all scalar contributions plus the qubit-level
/// observables derived from them.
struct DephasingBreakdown {
    double t = 0.0;
    double gamma_vac = 0.0;
    double gamma_th = 0.0;
    double gamma_corr = 0.0; // +inf at isolated flagged points
    double phi = 0.0;
    double chi = 0.0;
    double gamma_total = 0.0;
    std::complex<double> coherence{0.0, 0.0};
    double bloch_norm = 1.0;
    double entropy = 0.0;
};

} // namespace dephaselab

#endif
