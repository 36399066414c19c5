#include "dephaselab/decoherence.hpp"

#include "dephaselab/special_functions.hpp"

#include <cmath>

namespace dephaselab {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kOhmicBand = 1e-9; // |s-1| below which the s=1 forms apply

bool is_ohmic(double s) { return std::fabs(s - 1.0) < kOhmicBand; }

void require_exponential(const BathSpec& bath, const char* op)
{
    if (bath.j.kind() != CutoffKind::Exponential)
        throw std::invalid_argument(std::string(op) +
                                    ": closed method requires the exponential cutoff");
}

void require_time(double t)
{
    if (!(t >= 0.0))
        throw std::domain_error("decoherence: time must be >= 0");
}

// (1 - cos(w t))/w^2, evaluated as 2 sin^2(wt/2)/w^2 with a Taylor switch
// below wt = 1e-4 to avoid cancellation.
double kernel_one_minus_cos(double w, double t)
{
    const double wt = w * t;
    if (std::fabs(wt) < 1e-4)
        return 0.5 * t * t * (1.0 - wt * wt / 12.0);
    const double s = std::sin(0.5 * wt);
    return 2.0 * s * s / (w * w);
}

// sin(w t)/w with the same small-argument switch.
double kernel_sin_over_w(double w, double t)
{
    const double wt = w * t;
    if (std::fabs(wt) < 1e-4)
        return t * (1.0 - wt * wt / 6.0);
    return std::sin(wt) / w;
}

double bose_factor(double w, double beta) // 1/(e^{beta w} - 1)
{
    const double x = beta * w;
    if (x > 700.0)
        return 0.0;
    return 1.0 / std::expm1(x);
}

QuadratureOptions quad_opts(const DecoherenceTolerances& tol, double t,
                            double cutoff)
{
    QuadratureOptions o;
    o.rel_tol = tol.quad_rel;
    o.abs_tol = tol.quad_abs;
    o.upper_cutoff = cutoff;
    if (t > 0.0)
        o.oscillation_period = 2.0 * kPi / t;
    return o;
}

double thermal_cutoff(const BathSpec& bath)
{
    const double s = bath.j.s();
    return std::min(bath.j.integration_cutoff(),
                    (45.0 + 3.0 * std::max(s, 1.0)) / bath.beta);
}

// 1 - (1+x^2)^{-(s-1)/2} cos((s-1) atan(x)) without cancellation:
// -expm1(L) + e^L * 2 sin^2(theta/2) with L = -(s-1)/2 log1p(x^2).
double closed_bracket(double s, double x)
{
    const double L = -0.5 * (s - 1.0) * std::log1p(x * x);
    const double theta = (s - 1.0) * std::atan(x);
    const double sh = std::sin(0.5 * theta);
    return -std::expm1(L) + std::exp(L) * 2.0 * sh * sh;
}

double gamma_vac_closed(const BathSpec& bath, double t)
{
    const double lam = bath.j.lambda();
    const double om = bath.j.omega_c();
    const double s = bath.j.s();
    if (is_ohmic(s))
        return 0.5 * lam * std::log1p(om * om * t * t);
    return lam * gamma_real(s - 1.0) * closed_bracket(s, om * t);
}

double gamma_vac_quad(const BathSpec& bath, double t,
                      const DecoherenceTolerances& tol)
{
    const auto& j = bath.j;
    const auto q = integrate_semi_infinite(
        [&](double w) { return j.evaluate(w) * kernel_one_minus_cos(w, t); },
        quad_opts(tol, t, j.integration_cutoff()));
    return q.value;
}

double gamma_th_closed(const BathSpec& bath, double t,
                       const DecoherenceTolerances& tol)
{
    const double lam = bath.j.lambda();
    const double s = bath.j.s();
    const double beta = bath.beta;
    const double b = 1.0 / (bath.j.omega_c() * beta);
    const double tau = t / beta;

    if (is_ohmic(s)) {
        return 2.0 * lam *
               (ln_gamma_real(1.0 + b) -
                0.5 * ln_abs_gamma_sq(1.0 + b, tau));
    }
    const auto series = sum_series(
        [=](double k) {
            const double kk = k + b;
            return std::pow(kk, 1.0 - s) * closed_bracket(s, tau / kk);
        },
        tol.series_rel, tol.series_k_max);
    return 2.0 * lam * std::pow(bath.j.omega_c() * beta, 1.0 - s) *
           gamma_real(s - 1.0) * series.value;
}

double gamma_th_quad(const BathSpec& bath, double t,
                     const DecoherenceTolerances& tol)
{
    const auto& j = bath.j;
    const double beta = bath.beta;
    const auto q = integrate_semi_infinite(
        [&](double w) {
            return 2.0 * j.evaluate(w) * bose_factor(w, beta) *
                   kernel_one_minus_cos(w, t);
        },
        quad_opts(tol, t, thermal_cutoff(bath)));
    return q.value;
}

double gamma_th_low_temp(const BathSpec& bath, double t)
{
    require_exponential(bath, "gamma_th");
    if (!is_ohmic(bath.j.s()))
        throw std::invalid_argument(
            "gamma_th: the low-temperature form is the ohmic (s = 1) result");
    const double ob = bath.j.omega_c() * bath.beta;
    if (!(ob >= 10.0))
        throw std::domain_error(
            "gamma_th: low_temp requires Omega*beta >= 10");
    const double x = kPi * t / bath.beta; // t / tau_B
    if (x == 0.0)
        return 0.0;
    double v;
    if (x < 1e-4)
        v = x * x / 6.0;
    else if (x > 20.0)
        v = x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
    else
        v = std::log(std::sinh(x) / x);
    return bath.j.lambda() * v;
}

double phi_closed(const BathSpec& bath, double t)
{
    const double lam = bath.j.lambda();
    const double om = bath.j.omega_c();
    const double s = bath.j.s();
    if (is_ohmic(s))
        return lam * std::atan(om * t);
    const double L = -0.5 * (s - 1.0) * std::log1p(om * om * t * t);
    return lam * gamma_real(s - 1.0) * std::exp(L) *
           std::sin((s - 1.0) * std::atan(om * t));
}

double phi_quad(const BathSpec& bath, double t,
                const DecoherenceTolerances& tol)
{
    const auto& j = bath.j;
    const auto q = integrate_semi_infinite(
        [&](double w) {
            return w > 0.0 ? j.evaluate(w) * kernel_sin_over_w(w, t) / w : 0.0;
        },
        quad_opts(tol, t, j.integration_cutoff()));
    return q.value;
}

double dgamma_th_dt_closed(const BathSpec& bath, double t,
                           const DecoherenceTolerances& tol)
{
    const double lam = bath.j.lambda();
    const double s = bath.j.s();
    const double beta = bath.beta;
    const double b = 1.0 / (bath.j.omega_c() * beta);
    const double tau = t / beta;
    const auto series = sum_series(
        [=](double k) {
            const double kk = k + b;
            const double phik = std::atan(tau / kk);
            return std::sin(s * phik) /
                   std::pow(kk * kk + tau * tau, 0.5 * s);
        },
        tol.series_rel, tol.series_k_max);
    return 2.0 * lam * std::pow(bath.j.omega_c() * beta, 1.0 - s) / beta *
           std::exp(ln_gamma_real(s)) * series.value;
}

double dgamma_th_dt_quad(const BathSpec& bath, double t,
                         const DecoherenceTolerances& tol)
{
    const auto& j = bath.j;
    const double beta = bath.beta;
    const auto q = integrate_semi_infinite(
        [&](double w) {
            return 2.0 * j.evaluate(w) * bose_factor(w, beta) *
                   kernel_sin_over_w(w, t);
        },
        quad_opts(tol, t, thermal_cutoff(bath)));
    return q.value;
}

// Integral with an origin singularity that is integrable only for the
// caller-checked exponent range.  Near-divergent cases exhaust the panel
// budget; that is reported as +inf rather than an error.
double integral_or_infinity(const std::function<double(double)>& f,
                            double cutoff, const DecoherenceTolerances& tol)
{
    QuadratureOptions o;
    o.rel_tol = tol.quad_rel;
    o.abs_tol = tol.quad_abs;
    o.upper_cutoff = cutoff;
    try {
        return integrate_semi_infinite(f, o).value;
    } catch (const NonConvergenceError&) {
        return std::numeric_limits<double>::infinity();
    }
}

} // namespace

double gamma_vac(const BathSpec& bath, double t, Method method,
                 const DecoherenceTolerances& tol)
{
    require_time(t);
    if (t == 0.0 || bath.j.lambda() == 0.0)
        return 0.0;
    switch (method) {
    case Method::Closed:
        require_exponential(bath, "gamma_vac");
        return gamma_vac_closed(bath, t);
    case Method::Quadrature:
        return gamma_vac_quad(bath, t, tol);
    default:
        throw std::invalid_argument("gamma_vac: method must be closed or quadrature");
    }
}

double gamma_th(const BathSpec& bath, double t, Method method,
                const DecoherenceTolerances& tol)
{
    require_time(t);
    if (t == 0.0 || bath.j.lambda() == 0.0 || bath.zero_temperature())
        return 0.0;
    switch (method) {
    case Method::Closed:
        require_exponential(bath, "gamma_th");
        return gamma_th_closed(bath, t, tol);
    case Method::Quadrature:
        return gamma_th_quad(bath, t, tol);
    case Method::LowTemp:
        return gamma_th_low_temp(bath, t);
    }
    return 0.0;
}

bool low_temp_is_marginal(const BathSpec& bath)
{
    const double ob = bath.j.omega_c() * bath.beta;
    return ob >= 10.0 && ob < 50.0;
}

double phi(const BathSpec& bath, double t, Method method,
           const DecoherenceTolerances& tol)
{
    require_time(t);
    if (t == 0.0 || bath.j.lambda() == 0.0)
        return 0.0;
    switch (method) {
    case Method::Closed:
        require_exponential(bath, "phi");
        return phi_closed(bath, t);
    case Method::Quadrature:
        return phi_quad(bath, t, tol);
    default:
        throw std::invalid_argument("phi: method must be closed or quadrature");
    }
}

double dgamma_th_dt(const BathSpec& bath, double t, Method method,
                    const DecoherenceTolerances& tol)
{
    require_time(t);
    if (t == 0.0 || bath.j.lambda() == 0.0 || bath.zero_temperature())
        return 0.0;
    switch (method) {
    case Method::Closed:
        require_exponential(bath, "dgamma_th_dt");
        return dgamma_th_dt_closed(bath, t, tol);
    case Method::Quadrature:
        return dgamma_th_dt_quad(bath, t, tol);
    default:
        throw std::invalid_argument(
            "dgamma_th_dt: method must be closed or quadrature");
    }
}

CorrelationContext::CorrelationContext(double m_, double a_) : m(m_), a(a_)
{
    if (!(std::fabs(m) <= 1.0))
        throw std::domain_error("CorrelationContext: |m| must be <= 1");
    if (!(a >= 0.0))
        throw std::domain_error("CorrelationContext: a = beta*omega0/2 must be >= 0");
    if (std::isinf(a)) {
        kappa = (m == 1.0) ? -1.0 : 1.0;
    } else {
        const double th = std::tanh(a);
        kappa = (th - m) / (1.0 - m * th);
    }
}

double gamma_corr(const CorrelationContext& ctx, double phi_value)
{
    // ratio = (1-m^2) sin^2(Phi) sech^2(a) / (1 - m tanh a)^2, kept in
    // overflow-free form; the log argument is 1 - ratio in (0, 1].
    const double sp = std::sin(phi_value);
    double sech, th;
    if (std::isinf(ctx.a)) {
        sech = 0.0;
        th = 1.0;
    } else {
        sech = 1.0 / std::cosh(ctx.a);
        th = std::tanh(ctx.a);
    }
    const double den = 1.0 - ctx.m * th;
    const double ratio =
        (1.0 - ctx.m * ctx.m) * sp * sp * sech * sech / (den * den);
    if (ratio >= 1.0)
        return std::numeric_limits<double>::infinity();
    return -0.5 * std::log1p(-ratio);
}

std::complex<double> correlated_ratio(const CorrelationContext& ctx,
                                      double phi_value)
{
    return {std::cos(phi_value), ctx.kappa * std::sin(phi_value)};
}

std::vector<double> chi(const CorrelationContext& ctx,
                        std::span<const double> phi_series)
{
    std::vector<double> out(phi_series.size(), 0.0);
    if (ctx.kappa == 0.0 || phi_series.empty())
        return out;
    std::complex<double> prev = correlated_ratio(ctx, phi_series[0]);
    double acc = std::arg(prev); // Phi(0) = 0 gives arg = 0
    out[0] = acc;
    for (std::size_t i = 1; i < phi_series.size(); ++i) {
        const std::complex<double> cur = correlated_ratio(ctx, phi_series[i]);
        acc += std::arg(cur * std::conj(prev));
        out[i] = acc;
        prev = cur;
    }
    return out;
}

LongTimeLimits long_time_limits(const BathSpec& bath,
                                const std::optional<CorrelationContext>& ctx,
                                const DecoherenceTolerances& tol)
{
    const double s = bath.j.s();
    const double lam = bath.j.lambda();
    const auto regime = classify_regime(s);
    const bool exponential = bath.j.kind() == CutoffKind::Exponential;

    LongTimeLimits out;

    if (lam == 0.0) {
        out.gamma_vac_inf = LimitValue::finite(0.0);
        out.gamma_th_inf = LimitValue::finite(0.0);
        out.phi_inf = LimitValue::finite(0.0);
        if (ctx)
            out.gamma_corr_inf = LimitValue::finite(0.0);
        return out;
    }

    // vacuum: int J/w^2, finite only for s > 1
    if (regime.ohmicity == Ohmicity::Superohmic) {
        if (exponential) {
            out.gamma_vac_inf = LimitValue::finite(lam * gamma_real(s - 1.0));
        } else {
            QuadratureOptions o;
            o.rel_tol = tol.quad_rel;
            o.upper_cutoff = bath.j.integration_cutoff();
            const auto q = integrate_semi_infinite(
                [&](double w) {
                    return w > 0.0 ? bath.j.evaluate(w) / (w * w) : 0.0;
                },
                o);
            out.gamma_vac_inf = LimitValue::finite(q.value);
        }
    } else {
        out.gamma_vac_inf = LimitValue::infinite();
    }

    // thermal: finite for s > 2 (zero temperature gives gamma_th == 0)
    if (bath.zero_temperature()) {
        out.gamma_th_inf = LimitValue::finite(0.0);
    } else if (s > 2.0) {
        if (exponential) {
            const double ob = bath.j.omega_c() * bath.beta;
            out.gamma_th_inf = LimitValue::finite(
                2.0 * lam * std::pow(ob, 1.0 - s) * gamma_real(s - 1.0) *
                hurwitz_zeta(s - 1.0, 1.0 + 1.0 / ob));
        } else {
            QuadratureOptions o;
            o.rel_tol = tol.quad_rel;
            o.upper_cutoff = thermal_cutoff(bath);
            const auto q = integrate_semi_infinite(
                [&](double w) {
                    return w > 0.0 ? 2.0 * bath.j.evaluate(w) *
                                         bose_factor(w, bath.beta) / (w * w)
                                   : 0.0;
                },
                o);
            out.gamma_th_inf = LimitValue::finite(q.value);
        }
    } else {
        out.gamma_th_inf = LimitValue::infinite();
    }

    // phase: (pi/2) lim_{w->0} J(w)/w
    switch (regime.ohmicity) {
    case Ohmicity::Ohmic:
        out.phi_inf = LimitValue::finite(lam * kPi / 2.0);
        break;
    case Ohmicity::Superohmic:
        out.phi_inf = LimitValue::finite(0.0);
        break;
    case Ohmicity::Subohmic:
        out.phi_inf = LimitValue::none();
        break;
    }

    if (ctx) {
        switch (regime.ohmicity) {
        case Ohmicity::Superohmic:
            out.gamma_corr_inf = LimitValue::finite(0.0);
            break;
        case Ohmicity::Ohmic:
            out.gamma_corr_inf =
                LimitValue::finite(gamma_corr(*ctx, lam * kPi / 2.0));
            break;
        case Ohmicity::Subohmic:
            out.gamma_corr_inf = LimitValue::none();
            break;
        }
    }
    return out;
}

SufficiencyBounds sufficiency_bounds(const BathSpec& bath,
                                     const DecoherenceTolerances& tol)
{
    const double s = bath.j.s();
    const double lam = bath.j.lambda();
    const double inf = std::numeric_limits<double>::infinity();
    SufficiencyBounds out;

    if (lam == 0.0)
        return {0.0, 0.0};

    if (bath.j.kind() == CutoffKind::Exponential) {
        out.vac_bound = (s > 1.0 && !is_ohmic(s))
                            ? 2.0 * lam * gamma_real(s - 1.0)
                            : inf;
        if (bath.zero_temperature()) {
            out.th_bound = 0.0;
        } else if (s > 2.0) {
            const double ob = bath.j.omega_c() * bath.beta;
            out.th_bound = 4.0 * lam * std::pow(ob, 1.0 - s) *
                           gamma_real(s - 1.0) *
                           hurwitz_zeta(s - 1.0, 1.0 + 1.0 / ob);
        } else {
            out.th_bound = inf;
        }
        return out;
    }

    // With any admissible cutoff (F(0) = 1), convergence at the origin is
    // governed by s alone: s > 1 for the vacuum bound, s > 2 for the
    // thermal one.
    out.vac_bound =
        (classify_regime(s).ohmicity == Ohmicity::Superohmic)
            ? integral_or_infinity(
                  [&](double w) {
                      return w > 0.0 ? 2.0 * bath.j.evaluate(w) / (w * w) : 0.0;
                  },
                  bath.j.integration_cutoff(), tol)
            : inf;
    if (bath.zero_temperature()) {
        out.th_bound = 0.0;
    } else if (s > 2.0) {
        out.th_bound = integral_or_infinity(
            [&](double w) {
                return w > 0.0 ? 4.0 * bath.j.evaluate(w) *
                                     bose_factor(w, bath.beta) / (w * w)
                               : 0.0;
            },
            thermal_cutoff(bath), tol);
    } else {
        out.th_bound = inf;
    }
    return out;
}

} // namespace dephaselab
