#include "dephaselab/qubit.hpp"

#include "dephaselab/special_functions.hpp"

#include <cmath>

namespace dephaselab {

namespace {

constexpr double kLn2 = 0.693147180559945309417232121458;

void check_normalized(const PureProjector& p)
{
    const double n = std::norm(p.a0) + std::norm(p.a1);
    if (std::fabs(n - 1.0) > 1e-12)
        throw std::domain_error(
            "PureProjector: |a0|^2 + |a1|^2 must equal 1 within 1e-12");
}

std::complex<double> phase(double x) { return {std::cos(x), std::sin(x)}; }

double total_gamma(const BathSpec& bath, double t, Method method,
                   const DecoherenceTolerances& tol)
{
    return gamma_vac(bath, t, method, tol) + gamma_th(bath, t, method, tol);
}

} // namespace

QubitPreparation::QubitPreparation(PureProjector p, double omega0_)
    : state(std::move(p)), omega0(omega0_)
{
    if (!(omega0 > 0.0))
        throw std::domain_error("QubitPreparation: omega0 must be > 0");
    check_normalized(std::get<PureProjector>(state));
}

QubitPreparation::QubitPreparation(OperatorList l, double omega0_)
    : state(std::move(l)), omega0(omega0_)
{
    if (!(omega0 > 0.0))
        throw std::domain_error("QubitPreparation: omega0 must be > 0");
    if (std::get<OperatorList>(state).ops.empty())
        throw std::domain_error("QubitPreparation: empty operator list");
}

double sigma3_expectation(const PureProjector& p)
{
    return std::norm(p.a1) - std::norm(p.a0);
}

std::complex<double> initial_coherence(const PureProjector& p)
{
    return p.a0 * std::conj(p.a1);
}

ReducedInitialState reduce_initial_state(const OperatorList& l, double omega0,
                                         double beta)
{
    // Weights e^{+-beta w0/2} rescaled by e^{-beta w0/2}: the |0> branch
    // carries 1, the |1> branch carries u = e^{-beta w0}.
    ReducedInitialState r;
    r.boltzmann = std::isinf(beta) ? 0.0 : std::exp(-beta * omega0);
    const double u = r.boltzmann;
    double n00 = 0.0, n11 = 0.0;
    for (const Mat2& op : l.ops) {
        // indices: op[0]=O00, op[1]=O01, op[2]=O10, op[3]=O11
        r.weight_a0 += std::conj(op[2]) * op[0]; // <0|O^+ s+ O|0>
        r.weight_a1 += std::conj(op[3]) * op[1]; // <1|O^+ s+ O|1>
        n00 += std::norm(op[0]) + u * std::norm(op[1]);
        n11 += std::norm(op[2]) + u * std::norm(op[3]);
    }
    r.norm = n00 + n11;
    if (!(r.norm > 0.0))
        throw std::invalid_argument(
            "reduce_initial_state: degenerate preparation (zero weight)");
    r.rho00 = n00 / r.norm;
    r.rho11 = n11 / r.norm;
    r.sigma_plus = (r.weight_a0 + u * r.weight_a1) / r.norm;
    return r;
}

std::pair<double, double> initial_bath_weights(const PureProjector& p,
                                               double beta_omega0)
{
    check_normalized(p);
    if (!(beta_omega0 >= 0.0))
        throw std::domain_error("initial_bath_weights: beta*omega0 must be >= 0");
    const double w0 = std::norm(p.a0);
    const double w1 = std::norm(p.a1);
    // divide both weights by e^{+beta w0/2} so nothing overflows
    const double u = std::isinf(beta_omega0) ? 0.0 : std::exp(-beta_omega0);
    const double z = w0 + w1 * u;
    if (z == 0.0) // a0 = 0 at zero temperature: all weight on the + branch
        return {0.0, 1.0};
    return {w0 / z, w1 * u / z};
}

std::complex<double> coherence_uncorrelated(const QubitPreparation& prep,
                                            const BathSpec& bath, double t,
                                            Method method,
                                            const DecoherenceTolerances& tol)
{
    const auto& p = std::get<PureProjector>(prep.state);
    const std::complex<double> s0 = initial_coherence(p);
    if (s0 == std::complex<double>(0.0, 0.0))
        return s0;
    return s0 * phase(prep.omega0 * t) *
           std::exp(-total_gamma(bath, t, method, tol));
}

std::complex<double> coherence_correlated(const QubitPreparation& prep,
                                          const BathSpec& bath, double t,
                                          Method method,
                                          const DecoherenceTolerances& tol)
{
    const auto& p = std::get<PureProjector>(prep.state);
    const std::complex<double> s0 = initial_coherence(p);
    if (s0 == std::complex<double>(0.0, 0.0))
        return s0;
    const CorrelationContext ctx(sigma3_expectation(p),
                                 0.5 * bath.beta * prep.omega0);
    const double phi_t = phi(bath, t, method, tol);
    return s0 * phase(prep.omega0 * t) *
           std::exp(-total_gamma(bath, t, method, tol)) *
           correlated_ratio(ctx, phi_t);
}

std::complex<double> coherence_general(const QubitPreparation& prep,
                                       const BathSpec& bath, double t,
                                       Method method,
                                       const DecoherenceTolerances& tol)
{
    const auto& l = std::get<OperatorList>(prep.state);
    const ReducedInitialState r = reduce_initial_state(l, prep.omega0, bath.beta);
    const std::complex<double> num0 = r.weight_a0 + r.boltzmann * r.weight_a1;
    if (num0 == std::complex<double>(0.0, 0.0) &&
        r.weight_a0 == std::complex<double>(0.0, 0.0) &&
        r.weight_a1 == std::complex<double>(0.0, 0.0))
        return {0.0, 0.0}; // no coherence in the prepared state
    const double phi_t = phi(bath, t, method, tol);
    const std::complex<double> num =
        r.weight_a0 * phase(phi_t) + r.boltzmann * r.weight_a1 * phase(-phi_t);
    return phase(prep.omega0 * t) *
           std::exp(-total_gamma(bath, t, method, tol)) * num / r.norm;
}

double bloch_norm(double m, double gamma_tilde)
{
    if (!(std::fabs(m) <= 1.0))
        throw std::domain_error("bloch_norm: |m| must be <= 1");
    if (!(gamma_tilde >= 0.0))
        throw std::domain_error("bloch_norm: gamma_tilde must be >= 0");
    const double e = std::isinf(gamma_tilde) ? 0.0 : std::exp(-2.0 * gamma_tilde);
    return std::sqrt(m * m + (1.0 - m * m) * e);
}

double entropy(double v)
{
    if (v < 0.0 || v > 1.0) {
        if (v > 1.0 && v < 1.0 + 1e-12)
            v = 1.0;
        else if (v < 0.0 && v > -1e-12)
            v = 0.0;
        else
            throw std::domain_error("entropy: v must lie in [0, 1]");
    }
    const double one_minus = 1.0 - v;
    if (one_minus < 1e-8) // continuous limit at v = 1: S ~ (1-v)(1-ln(1-v))/2
        return one_minus <= 0.0
                   ? 0.0
                   : 0.5 * one_minus * (1.0 - std::log(one_minus));
    return kLn2 - 0.5 * (1.0 + v) * std::log1p(v) -
           0.5 * one_minus * std::log1p(-v);
}

double entropy_limit(double m, const BathSpec& bath)
{
    if (!(std::fabs(m) <= 1.0))
        throw std::domain_error("entropy_limit: |m| must be <= 1");
    const double s = bath.j.s();
    if (s <= 2.0)
        return entropy(std::fabs(m));
    const auto lim = long_time_limits(bath);
    double g_inf = 0.0;
    if (lim.gamma_vac_inf.is_finite())
        g_inf += lim.gamma_vac_inf.value;
    if (lim.gamma_th_inf.is_finite())
        g_inf += lim.gamma_th_inf.value;
    return entropy(bloch_norm(m, g_inf));
}

ExpForm exp_form(double v)
{
    if (!(v >= 0.0 && v < 1.0))
        throw std::domain_error("exp_form: representation requires 0 <= v < 1");
    return {0.5 * std::sqrt((1.0 - v) * (1.0 + v)), std::atanh(v)};
}

QubitStateAtTime state_at(const QubitPreparation& prep, const BathSpec& bath,
                          double t, InitialStateKind kind, Method method,
                          const DecoherenceTolerances& tol)
{
    QubitStateAtTime st;
    double m;
    if (prep.is_projector()) {
        const auto& p = std::get<PureProjector>(prep.state);
        m = sigma3_expectation(p);
        st.coherence = (kind == InitialStateKind::Correlated)
                           ? coherence_correlated(prep, bath, t, method, tol)
                           : coherence_uncorrelated(prep, bath, t, method, tol);
        st.rho[0] = std::norm(p.a0);
        st.rho[3] = std::norm(p.a1);
    } else {
        const auto& l = std::get<OperatorList>(prep.state);
        const ReducedInitialState r =
            reduce_initial_state(l, prep.omega0, bath.beta);
        m = r.rho11 - r.rho00;
        st.coherence = coherence_general(prep, bath, t, method, tol);
        st.rho[0] = r.rho00;
        st.rho[3] = r.rho11;
    }
    st.rho[1] = st.coherence;
    st.rho[2] = std::conj(st.coherence);
    st.bloch_norm =
        std::sqrt(4.0 * std::norm(st.coherence) + m * m);
    st.entropy = entropy(std::min(st.bloch_norm, 1.0));
    return st;
}

} // namespace dephaselab
