#include "dephaselab/discrete_bath.hpp"

#include "dephaselab/numerics.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dephaselab {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the
// three-term recurrence (nodes accurate to ~1e-15 for K up to several
// thousand).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int mid = (n + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15)
                break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

double coth_half(double beta, double omega)
{
    if (std::isinf(beta))
        return 1.0;
    return 1.0 / std::tanh(0.5 * beta * omega);
}

double one_minus_cos_over_w2(double omega, double t)
{
    const double wt = omega * t;
    if (std::fabs(wt) < 1e-4)
        return 0.5 * t * t * (1.0 - wt * wt / 12.0);
    const double s = std::sin(0.5 * wt);
    return 2.0 * s * s / (omega * omega);
}

} // namespace

DiscreteBath discretize(const SpectralDensity& j, int K, double omega_max)
{
    if (K < 1)
        throw std::invalid_argument("discretize: K must be >= 1");
    if (!(omega_max > 0.0))
        throw std::invalid_argument("discretize: omega_max must be > 0");

    std::vector<double> x, w;
    gauss_legendre(K, x, w);

    DiscreteBath bath;
    bath.omega.resize(K);
    bath.weight.resize(K);
    if (j.s() < 1.0) {
        // Subohmic J/omega kernels carry an omega^{s-1} origin singularity
        // that plain Gauss-Legendre resolves only as 1/K; the square-root
        // map omega = omega_max u^2 makes the transformed integrands smooth.
        for (int k = 0; k < K; ++k) {
            const double u = 0.5 * (1.0 + x[k]);
            const double wk = omega_max * u * u;
            bath.omega[k] = wk;
            bath.weight[k] = w[k] * omega_max * u * j.evaluate(wk);
        }
    } else {
        const double half = 0.5 * omega_max;
        for (int k = 0; k < K; ++k) {
            const double wk = half * (1.0 + x[k]);
            bath.omega[k] = wk;
            bath.weight[k] = half * w[k] * j.evaluate(wk);
        }
    }
    return bath;
}

double default_discretization_cutoff(const SpectralDensity& j)
{
    return j.omega_c() * std::max(40.0, 10.0 + 5.0 * j.s());
}

double recurrence_time(const DiscreteBath& bath)
{
    if (bath.size() < 2)
        return std::numeric_limits<double>::infinity();
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < bath.size(); ++k)
        min_gap = std::min(min_gap, bath.omega[k] - bath.omega[k - 1]);
    return 2.0 * kPi / min_gap;
}

double gamma_discrete(const DiscreteBath& bath, double beta, double t)
{
    if (!(beta > 0.0))
        throw std::domain_error("gamma_discrete: beta must be positive or inf");
    std::vector<double> terms(bath.size());
    for (std::size_t k = 0; k < bath.size(); ++k)
        terms[k] = bath.weight[k] * coth_half(beta, bath.omega[k]) *
                   one_minus_cos_over_w2(bath.omega[k], t);
    return pairwise_sum(terms);
}

double phi_discrete(const DiscreteBath& bath, double t)
{
    std::vector<double> terms(bath.size());
    for (std::size_t k = 0; k < bath.size(); ++k)
        terms[k] = bath.weight[k] * std::sin(bath.omega[k] * t) /
                   (bath.omega[k] * bath.omega[k]);
    return pairwise_sum(terms);
}

std::complex<double> mode_displacement(double g, double omega, double t)
{
    if (!(omega > 0.0))
        throw std::domain_error("mode_displacement: omega must be > 0");
    const std::complex<double> one_minus_e(1.0 - std::cos(omega * t),
                                           -std::sin(omega * t));
    return 2.0 * g * one_minus_e / omega;
}

std::vector<double> gamma_discrete_grid_serial(const DiscreteBath& bath,
                                               double beta,
                                               std::span<const double> times)
{
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out[i] = gamma_discrete(bath, beta, times[i]);
    return out;
}

std::vector<double> phi_discrete_grid_serial(const DiscreteBath& bath,
                                             std::span<const double> times)
{
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out[i] = phi_discrete(bath, times[i]);
    return out;
}

std::vector<double> gamma_discrete_grid(const DiscreteBath& bath, double beta,
                                        std::span<const double> times,
                                        bool parallel)
{
    if (!parallel)
        return gamma_discrete_grid_serial(bath, beta, times);
    std::vector<double> out(times.size());
    const long n = static_cast<long>(times.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
    for (long i = 0; i < n; ++i)
        out[i] = gamma_discrete(bath, beta, times[i]);
    return out;
}

std::vector<double> phi_discrete_grid(const DiscreteBath& bath,
                                      std::span<const double> times,
                                      bool parallel)
{
    if (!parallel)
        return phi_discrete_grid_serial(bath, times);
    std::vector<double> out(times.size());
    const long n = static_cast<long>(times.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
    for (long i = 0; i < n; ++i)
        out[i] = phi_discrete(bath, times[i]);
    return out;
}

} // namespace dephaselab
