#ifndef DEPHASELAB_DISCRETE_BATH_HPP
#define DEPHASELAB_DISCRETE_BATH_HPP

// Independent validation path: a finite set of bath modes whose weighted
// sums reproduce the continuum integrals.  Mode sums use a fixed-tree
// pairwise reduction, so results are bitwise identical for any thread count.

#include "dephaselab/spectral.hpp"

#include <complex>
#include <span>
#include <vector>

namespace dephaselab {

struct DiscreteBath {
    std::vector<double> omega;  // strictly increasing, > 0
    std::vector<double> weight; // 4|g_k|^2, >= 0

    std::size_t size() const { return omega.size(); }
};

/// Gauss-Legendre discretization of J on [0, omega_max]:
/// weight_k = w_k J(omega_k).  Deterministic for fixed inputs.
DiscreteBath discretize(const SpectralDensity& j, int K, double omega_max);

/// omega_max = Omega * max(40, 10 + 5 s): truncated tail of J below 1e-14
/// of the integral for the exponential cutoff.
double default_discretization_cutoff(const SpectralDensity& j);

/// Validity window of the discrete sums: below the node-spacing recurrence
/// scale 2 pi / min(delta omega) the quasi-periodic revivals are absent.
double recurrence_time(const DiscreteBath& bath);

/// sum_k weight_k coth(beta omega_k/2) (1 - cos(omega_k t))/omega_k^2
/// (coth -> 1 at beta = +inf).
double gamma_discrete(const DiscreteBath& bath, double beta, double t);

/// sum_k weight_k sin(omega_k t)/omega_k^2.
double phi_discrete(const DiscreteBath& bath, double t);

/// Single-mode displacement amplitude alpha_k(t) = 2 g (1 - e^{i omega t})/omega;
/// gamma of one mode equals coth(beta omega/2) |alpha|^2 / 2 with
/// weight = 4 g^2.
std::complex<double> mode_displacement(double g, double omega, double t);

/// Grid evaluation, one value per time.  `parallel` enables the OpenMP
/// kernel; values are bitwise identical to the serial reference.
std::vector<double> gamma_discrete_grid(const DiscreteBath& bath, double beta,
                                        std::span<const double> times,
                                        bool parallel = true);
std::vector<double> phi_discrete_grid(const DiscreteBath& bath,
                                      std::span<const double> times,
                                      bool parallel = true);

/// Serial reference implementations kept for testing and benchmarking.
std::vector<double> gamma_discrete_grid_serial(const DiscreteBath& bath,
                                               double beta,
                                               std::span<const double> times);
std::vector<double> phi_discrete_grid_serial(const DiscreteBath& bath,
                                             std::span<const double> times);

} // namespace dephaselab

#endif
