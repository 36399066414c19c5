#include "dephaselab/timeseries.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dephaselab {

std::vector<double> TimeGrid::times() const
{
    if (points < 2)
        throw std::invalid_argument("TimeGrid: need at least 2 points");
    if (!(t_min >= 0.0) || !(t_max > t_min))
        throw std::invalid_argument("TimeGrid: require 0 <= t_min < t_max");
    if (spacing == Spacing::Log && !(t_min > 0.0))
        throw std::invalid_argument("TimeGrid: log spacing requires t_min > 0");

    std::vector<double> t(points);
    if (spacing == Spacing::Linear) {
        const double dt = (t_max - t_min) / (points - 1);
        for (int i = 0; i < points; ++i)
            t[i] = t_min + i * dt;
    } else {
        const double l0 = std::log(t_min);
        const double dl = (std::log(t_max) - l0) / (points - 1);
        for (int i = 0; i < points; ++i)
            t[i] = std::exp(l0 + i * dl);
    }
    t.back() = t_max;
    return t;
}

Method resolve_method(MethodChoice choice, const BathSpec& bath)
{
    switch (choice) {
    case MethodChoice::Closed:
        return Method::Closed;
    case MethodChoice::Quadrature:
        return Method::Quadrature;
    default:
        return bath.j.kind() == CutoffKind::Exponential ? Method::Closed
                                                        : Method::Quadrature;
    }
}

namespace {

std::complex<double> phase(double x) { return {std::cos(x), std::sin(x)}; }

struct ScalarColumns {
    std::vector<double> g_vac, g_th, phi_v;
};

ScalarColumns scalar_grid(const BathSpec& bath, std::span<const double> times,
                          Method method, const DecoherenceTolerances& tol,
                          bool parallel)
{
    const long n = static_cast<long>(times.size());
    ScalarColumns c;
    c.g_vac.resize(n);
    c.g_th.resize(n);
    c.phi_v.resize(n);
    // exceptions must not unwind out of the parallel region
    std::exception_ptr failure = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#else
    (void)parallel;
#endif
    for (long i = 0; i < n; ++i) {
        if (failure)
            continue;
        try {
            c.g_vac[i] = gamma_vac(bath, times[i], method, tol);
            c.g_th[i] = gamma_th(bath, times[i], method, tol);
            c.phi_v[i] = phi(bath, times[i], method, tol);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(dephaselab_scalar_grid_failure)
#endif
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return c;
}

BreakdownSeries assemble(const QubitPreparation& prep, const BathSpec& bath,
                         InitialStateKind kind, std::span<const double> times,
                         const ScalarColumns& c)
{
    const long n = static_cast<long>(times.size());
    BreakdownSeries out;
    out.rows.resize(n);

    if (prep.is_projector()) {
        const auto& p = std::get<PureProjector>(prep.state);
        const double m = sigma3_expectation(p);
        const std::complex<double> s0 = initial_coherence(p);
        const bool correlated = (kind == InitialStateKind::Correlated);

        std::vector<double> chi_series(n, 0.0);
        std::optional<CorrelationContext> ctx;
        if (correlated) {
            ctx.emplace(m, 0.5 * bath.beta * prep.omega0);
            chi_series = chi(*ctx, c.phi_v);
            out.has_uncorrelated_reference = true;
            out.abs_coherence_uncorrelated.resize(n);
        }

        for (long i = 0; i < n; ++i) {
            DephasingBreakdown& r = out.rows[i];
            r.t = times[i];
            r.gamma_vac = c.g_vac[i];
            r.gamma_th = c.g_th[i];
            r.phi = c.phi_v[i];
            const double g = r.gamma_vac + r.gamma_th;
            const double abs_unc = std::abs(s0) * std::exp(-g);
            if (correlated) {
                r.gamma_corr = gamma_corr(*ctx, r.phi);
                r.chi = chi_series[i];
                r.coherence = s0 * phase(prep.omega0 * r.t) * std::exp(-g) *
                              correlated_ratio(*ctx, r.phi);
                out.abs_coherence_uncorrelated[i] = abs_unc;
            } else {
                r.gamma_corr = 0.0;
                r.chi = 0.0;
                r.coherence = s0 * phase(prep.omega0 * r.t) * std::exp(-g);
            }
            r.gamma_total = g + r.gamma_corr;
            r.bloch_norm = std::sqrt(4.0 * std::norm(r.coherence) + m * m);
            r.entropy = entropy(std::min(r.bloch_norm, 1.0));
        }
        return out;
    }

    // Operator-list preparation: exact ratio, effective gamma_corr/chi.
    const auto& l = std::get<OperatorList>(prep.state);
    const ReducedInitialState red =
        reduce_initial_state(l, prep.omega0, bath.beta);
    const double m = red.rho11 - red.rho00;
    out.gamma_corr_is_effective = true;
    out.has_uncorrelated_reference = true;
    out.abs_coherence_uncorrelated.resize(n);

    std::vector<std::complex<double>> ratio(n);
    for (long i = 0; i < n; ++i) {
        const std::complex<double> num =
            red.weight_a0 * phase(c.phi_v[i]) +
            red.boltzmann * red.weight_a1 * phase(-c.phi_v[i]);
        const std::complex<double> den =
            red.weight_a0 + red.boltzmann * red.weight_a1;
        // den = 0 means the prepared state carries no initial coherence;
        // the corr/uncorr ratio is undefined there, so report a neutral 1.
        ratio[i] = (den == std::complex<double>(0.0, 0.0))
                       ? std::complex<double>(1.0, 0.0)
                       : num / den;
    }
    // unwrap the ratio phase along the series
    std::vector<double> chi_eff(n, 0.0);
    double acc = std::arg(ratio.empty() ? std::complex<double>(1.0) : ratio[0]);
    for (long i = 0; i < n; ++i) {
        if (i > 0)
            acc += std::arg(ratio[i] * std::conj(ratio[i - 1]));
        chi_eff[i] = acc;
    }

    for (long i = 0; i < n; ++i) {
        DephasingBreakdown& r = out.rows[i];
        r.t = times[i];
        r.gamma_vac = c.g_vac[i];
        r.gamma_th = c.g_th[i];
        r.phi = c.phi_v[i];
        const double g = r.gamma_vac + r.gamma_th;
        const double amod = std::abs(ratio[i]);
        r.gamma_corr = (amod > 0.0)
                           ? -std::log(amod)
                           : std::numeric_limits<double>::infinity();
        r.chi = chi_eff[i];
        r.coherence = phase(prep.omega0 * r.t) * std::exp(-g) *
                      (red.weight_a0 * phase(r.phi) +
                       red.boltzmann * red.weight_a1 * phase(-r.phi)) /
                      red.norm;
        out.abs_coherence_uncorrelated[i] = std::abs(red.sigma_plus) *
                                            std::exp(-g);
        r.gamma_total = g + r.gamma_corr;
        r.bloch_norm = std::sqrt(4.0 * std::norm(r.coherence) + m * m);
        r.entropy = entropy(std::min(r.bloch_norm, 1.0));
    }
    return out;
}

} // namespace

BreakdownSeries evaluate_breakdown_grid(const QubitPreparation& prep,
                                        const BathSpec& bath,
                                        InitialStateKind kind,
                                        std::span<const double> times,
                                        const EvaluationOptions& opts)
{
    const Method method = resolve_method(opts.method, bath);
    const ScalarColumns c =
        scalar_grid(bath, times, method, opts.tol, opts.parallel);
    return assemble(prep, bath, kind, times, c);
}

BreakdownSeries evaluate_breakdown_grid_serial(const QubitPreparation& prep,
                                               const BathSpec& bath,
                                               InitialStateKind kind,
                                               std::span<const double> times,
                                               EvaluationOptions opts)
{
    opts.parallel = false;
    return evaluate_breakdown_grid(prep, bath, kind, times, opts);
}

int count_extrema(std::span<const double> series, double rel_noise)
{
    if (series.size() < 3)
        return 0;
    double scale = 0.0;
    for (double v : series)
        if (std::isfinite(v))
            scale = std::max(scale, std::fabs(v));
    const double noise = rel_noise * scale + 1e-300;

    int count = 0;
    int last_sign = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double d = series[i] - series[i - 1];
        if (!std::isfinite(d) || std::fabs(d) <= noise)
            continue;
        const int sign = d > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign)
            ++count;
        last_sign = sign;
    }
    return count;
}

bool is_monotone_nondecreasing(std::span<const double> series,
                               double rel_noise)
{
    double scale = 0.0;
    for (double v : series)
        if (std::isfinite(v))
            scale = std::max(scale, std::fabs(v));
    const double noise = rel_noise * scale + 1e-300;
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i] - series[i - 1] < -noise)
            return false;
    return true;
}

int count_sign_changes(std::span<const double> series, double rel_noise)
{
    double scale = 0.0;
    for (double v : series)
        if (std::isfinite(v))
            scale = std::max(scale, std::fabs(v));
    const double noise = rel_noise * scale + 1e-300;
    int count = 0, last = 0;
    for (double v : series) {
        if (!std::isfinite(v) || std::fabs(v) <= noise)
            continue;
        const int sign = v > 0.0 ? 1 : -1;
        if (last != 0 && sign != last)
            ++count;
        last = sign;
    }
    return count;
}

} // namespace dephaselab
