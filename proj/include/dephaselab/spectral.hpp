#ifndef DEPHASELAB_SPECTRAL_HPP
#define DEPHASELAB_SPECTRAL_HPP

// Bath spectral densities J(w) = lambda_s Omega^{1-s} w^s F(w/Omega) and
// derived static bath quantities.  Immutable after construction.

#include <span>
#include <stdexcept>
#include <vector>

namespace dephaselab {

enum class CutoffKind { Exponential, Tabulated };

/// Monotone-cubic (Fritsch-Carlson) interpolant for a tabulated cutoff
/// function F, with exponential extrapolation beyond the last sample.
/// Samples must start at x = 0 with F(0) = 1 within 1e-9, be nonnegative,
/// and end below `tail_threshold`.
class TabulatedCutoff {
public:
    TabulatedCutoff() = default;
    TabulatedCutoff(std::span<const double> x, std::span<const double> f,
                    double tail_threshold = 1e-6);

    double operator()(double x) const;
    /// x beyond which F(x) < eps, using the extrapolated tail.
    double support(double eps) const;

private:
    std::vector<double> x_, f_, slope_;
    double decay_rate_ = 1.0;
};

class SpectralDensity {
public:
    /// J(w) = lambda Omega^{1-s} w^s exp(-w/Omega)
    static SpectralDensity exponential(double lambda, double s, double omega_c);
    /// J(w) = lambda Omega^{1-s} w^s F(w/Omega) with tabulated F
    static SpectralDensity tabulated(double lambda, double s, double omega_c,
                                     std::span<const double> x,
                                     std::span<const double> f,
                                     double tail_threshold = 1e-6);

    /// Throws std::domain_error for negative w; J(0) = 0 for s > 0.
    double evaluate(double omega) const;
    /// Cutoff function F(w/Omega).
    double cutoff_function(double x) const;

    double lambda() const { return lambda_; }
    double s() const { return s_; }
    double omega_c() const { return omega_c_; }
    CutoffKind kind() const { return kind_; }

    /// Frequency beyond which J and its low-order polynomial weights are
    /// negligible (< ~1e-18 relative); used to truncate quadratures.
    double integration_cutoff() const;

private:
    SpectralDensity(double lambda, double s, double omega_c, CutoffKind kind);

    double lambda_ = 0.0, s_ = 1.0, omega_c_ = 1.0;
    CutoffKind kind_ = CutoffKind::Exponential;
    TabulatedCutoff table_;
};

/// Bath = spectral density + inverse temperature.  beta = +inf encodes zero
/// temperature.
struct BathSpec {
    SpectralDensity j;
    double beta = 0.0;

    BathSpec(SpectralDensity j_, double beta_) : j(std::move(j_)), beta(beta_)
    {
        if (!(beta > 0.0))
            throw std::domain_error("BathSpec: beta must be positive (or inf)");
    }
    bool zero_temperature() const;
};

enum class Ohmicity { Subohmic, Ohmic, Superohmic };
enum class Completeness { Complete, Incomplete };

struct RegimeClass {
    Ohmicity ohmicity;
    Completeness completeness;
};

/// s < 1 subohmic, |s-1| < 1e-9 ohmic, s > 1 superohmic; decoherence is
/// complete for s <= 2 and incomplete beyond.  Throws for s <= 0.
RegimeClass classify_regime(double s);

const char* to_string(Ohmicity o);
const char* to_string(Completeness c);

/// Static reorganization energy (1/4) int_0^inf J(w)/w dw; equals
/// lambda Gamma(s) Omega / 4 for the exponential cutoff.
double reorganization_shift(const SpectralDensity& j);

} // namespace dephaselab

#endif
