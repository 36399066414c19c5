#ifndef DEPHASELAB_QUBIT_HPP
#define DEPHASELAB_QUBIT_HPP

// Qubit-level observables: coherences for uncorrelated, projector-correlated
// and general operator-prepared initial states; density matrix, Bloch norm
// and entropy.
//
// Basis convention: states are ordered (|0>, |1>) with sigma_3|0> = -|0>,
// sigma_3|1> = +|1>; 2x2 matrices are row-major std::array<complex,4>.
// The coherence <sigma_+(t)> is the element <0|rho(t)|1>; its initial value
// for the pure state a0|0> + a1|1> is a0 * conj(a1).

#include "dephaselab/decoherence.hpp"
#include "dephaselab/spectral.hpp"

#include <array>
#include <complex>
#include <variant>
#include <vector>

namespace dephaselab {

using Mat2 = std::array<std::complex<double>, 4>; // row-major, basis (|0>,|1>)

/// Pure-state projector preparation |psi> = a0|0> + a1|1>,
/// |a0|^2 + |a1|^2 = 1 within 1e-12 (checked).
struct PureProjector {
    std::complex<double> a0{1.0, 0.0};
    std::complex<double> a1{0.0, 0.0};
};

/// Preparation by a list of 2x2 operators Omega_m.
struct OperatorList {
    std::vector<Mat2> ops;
};

struct QubitPreparation {
    std::variant<PureProjector, OperatorList> state;
    double omega0 = 1.0; // qubit splitting, > 0

    QubitPreparation(PureProjector p, double omega0_);
    QubitPreparation(OperatorList l, double omega0_);

    bool is_projector() const
    {
        return std::holds_alternative<PureProjector>(state);
    }
};

/// <sigma_3> = |a1|^2 - |a0|^2.
double sigma3_expectation(const PureProjector& p);

/// <sigma_+> at t = 0: a0 conj(a1).
std::complex<double> initial_coherence(const PureProjector& p);

/// Reduced initial state of an operator-list preparation obtained from the
/// same weight algebra as the coherence formula.
struct ReducedInitialState {
    double rho00 = 0.0, rho11 = 0.0;
    std::complex<double> sigma_plus{0.0, 0.0}; // <0|rho(0)|1>
    std::complex<double> weight_a0{0.0, 0.0};  // sum_m <0|Om^+ s+ Om|0>
    std::complex<double> weight_a1{0.0, 0.0};  // sum_m <1|Om^+ s+ Om|1>
    double boltzmann = 0.0;                    // e^{-beta omega0}
    double norm = 0.0;                         // weight normalization
};

/// Throws std::invalid_argument for a degenerate preparation (all weights
/// vanish).
ReducedInitialState reduce_initial_state(const OperatorList& l, double omega0,
                                         double beta);

/// Thermal weights of the two displaced-bath branches:
/// (p_minus, p_plus) ~ (|a0|^2 e^{+beta w0/2}, |a1|^2 e^{-beta w0/2}),
/// normalized to 1.
std::pair<double, double> initial_bath_weights(const PureProjector& p,
                                               double beta_omega0);

/// <sigma_+> e^{i w0 t} e^{-gamma(t)} with gamma = gamma_vac + gamma_th.
std::complex<double> coherence_uncorrelated(const QubitPreparation& prep,
                                            const BathSpec& bath, double t,
                                            Method method,
                                            const DecoherenceTolerances& tol = {});

/// Projector-correlated coherence; equals the uncorrelated one times
/// cos(Phi) + i kappa sin(Phi).
std::complex<double> coherence_correlated(const QubitPreparation& prep,
                                          const BathSpec& bath, double t,
                                          Method method,
                                          const DecoherenceTolerances& tol = {});

/// General operator-list coherence (exact weight-ratio expression).
std::complex<double> coherence_general(const QubitPreparation& prep,
                                       const BathSpec& bath, double t,
                                       Method method,
                                       const DecoherenceTolerances& tol = {});

/// sqrt(m^2 + (1 - m^2) e^{-2 gamma_tilde}); in [|m|, 1].
double bloch_norm(double m, double gamma_tilde);

/// Qubit von Neumann entropy from the Bloch norm:
/// ln 2 - (1+v)/2 ln(1+v) - (1-v)/2 ln(1-v), in [0, ln 2].
/// Throws std::domain_error outside [0, 1] beyond 1e-12 slack.
double entropy(double v);

/// Long-time entropy: entropy(|m|) in the complete regime (s <= 2), else
/// entropy(v_inf) with gamma(inf) from the vacuum + thermal limits.
double entropy_limit(double m, const BathSpec& bath);

/// Exponential representation rho = prefactor * exp(u sigma.n), valid for
/// v < 1: prefactor = sqrt(1-v^2)/2, u = atanh(v).
struct ExpForm {
    double prefactor = 0.5;
    double u = 0.0;
};
ExpForm exp_form(double v);

enum class InitialStateKind { Uncorrelated, Correlated };

struct QubitStateAtTime {
    Mat2 rho{};
    double bloch_norm = 1.0;
    double entropy = 0.0;
    std::complex<double> coherence{0.0, 0.0};
};

/// Assembles rho(t) (constant populations, coherence off-diagonal), the
/// Bloch norm and the entropy.  `kind` selects the correlated or factorized
/// initial condition for projector preparations; operator lists are always
/// correlated.
QubitStateAtTime state_at(const QubitPreparation& prep, const BathSpec& bath,
                          double t, InitialStateKind kind,
                          Method method,
                          const DecoherenceTolerances& tol = {});

} // namespace dephaselab

#endif
