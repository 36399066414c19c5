#include "dephaselab/spectral.hpp"

#include "dephaselab/numerics.hpp"
#include "dephaselab/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace dephaselab {

TabulatedCutoff::TabulatedCutoff(std::span<const double> x,
                                 std::span<const double> f,
                                 double tail_threshold)
    : x_(x.begin(), x.end()), f_(f.begin(), f.end())
{
    if (x_.size() != f_.size() || x_.size() < 3)
        throw std::invalid_argument("TabulatedCutoff: need >= 3 (x, F) samples");
    if (x_.front() != 0.0 || std::fabs(f_.front() - 1.0) > 1e-9)
        throw std::invalid_argument("TabulatedCutoff: first sample must be F(0) = 1");
    for (std::size_t i = 1; i < x_.size(); ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("TabulatedCutoff: abscissae must increase");
    for (double v : f_)
        if (!(v >= 0.0))
            throw std::invalid_argument("TabulatedCutoff: F samples must be >= 0");
    if (!(f_.back() < tail_threshold))
        throw std::invalid_argument(
            "TabulatedCutoff: last sample must lie below the tail threshold");

    // Fritsch-Carlson shape-preserving slopes.
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (f_[i + 1] - f_[i]) / h[i];
    }
    slope_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            slope_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0)
            return 0.0;
        if (std::fabs(m) > 3.0 * std::fabs(d0))
            return 3.0 * d0;
        return m;
    };
    slope_.front() = endpoint(h[0], h[1], d[0], d[1]);
    slope_.back() = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);

    // Exponential tail rate from the last two positive samples.
    decay_rate_ = 1.0 / std::max(x_.back(), 1.0);
    if (f_[n - 1] > 0.0 && f_[n - 2] > f_[n - 1]) {
        const double r =
            std::log(f_[n - 2] / f_[n - 1]) / (x_[n - 1] - x_[n - 2]);
        if (r > 0.0 && std::isfinite(r))
            decay_rate_ = r;
    }
}

double TabulatedCutoff::operator()(double x) const
{
    if (x <= 0.0)
        return f_.front();
    if (x >= x_.back()) {
        if (f_.back() <= 0.0)
            return 0.0;
        return f_.back() * std::exp(-decay_rate_ * (x - x_.back()));
    }
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double u = (x - x_[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double v = (2.0 * u3 - 3.0 * u2 + 1.0) * f_[i] +
                     (u3 - 2.0 * u2 + u) * h * slope_[i] +
                     (-2.0 * u3 + 3.0 * u2) * f_[i + 1] +
                     (u3 - u2) * h * slope_[i + 1];
    return std::max(v, 0.0);
}

double TabulatedCutoff::support(double eps) const
{
    if (f_.back() <= eps || f_.back() <= 0.0)
        return x_.back();
    return x_.back() + std::log(f_.back() / eps) / decay_rate_;
}

SpectralDensity::SpectralDensity(double lambda, double s, double omega_c,
                                 CutoffKind kind)
    : lambda_(lambda), s_(s), omega_c_(omega_c), kind_(kind)
{
    if (!(lambda >= 0.0))
        throw std::domain_error("SpectralDensity: lambda must be >= 0");
    if (!(s > 0.0))
        throw std::domain_error("SpectralDensity: s must be > 0");
    if (!(omega_c > 0.0))
        throw std::domain_error("SpectralDensity: Omega must be > 0");
}

SpectralDensity SpectralDensity::exponential(double lambda, double s,
                                             double omega_c)
{
    return SpectralDensity(lambda, s, omega_c, CutoffKind::Exponential);
}

SpectralDensity SpectralDensity::tabulated(double lambda, double s,
                                           double omega_c,
                                           std::span<const double> x,
                                           std::span<const double> f,
                                           double tail_threshold)
{
    SpectralDensity j(lambda, s, omega_c, CutoffKind::Tabulated);
    j.table_ = TabulatedCutoff(x, f, tail_threshold);
    return j;
}

double SpectralDensity::cutoff_function(double x) const
{
    if (kind_ == CutoffKind::Exponential)
        return std::exp(-x);
    return table_(x);
}

double SpectralDensity::evaluate(double omega) const
{
    if (omega < 0.0)
        throw std::domain_error("SpectralDensity: omega must be >= 0");
    if (omega == 0.0)
        return 0.0;
    return lambda_ * std::pow(omega_c_, 1.0 - s_) * std::pow(omega, s_) *
           cutoff_function(omega / omega_c_);
}

double SpectralDensity::integration_cutoff() const
{
    if (kind_ == CutoffKind::Exponential)
        return omega_c_ * (45.0 + 3.0 * std::max(s_, 1.0));
    return omega_c_ * (table_.support(1e-18) + 3.0 * std::max(s_, 1.0));
}

bool BathSpec::zero_temperature() const { return std::isinf(beta); }

RegimeClass classify_regime(double s)
{
    if (!(s > 0.0))
        throw std::domain_error("classify_regime: s must be > 0");
    RegimeClass r{};
    if (std::fabs(s - 1.0) < 1e-9)
        r.ohmicity = Ohmicity::Ohmic;
    else if (s < 1.0)
        r.ohmicity = Ohmicity::Subohmic;
    else
        r.ohmicity = Ohmicity::Superohmic;
    r.completeness = (s <= 2.0) ? Completeness::Complete : Completeness::Incomplete;
    return r;
}

const char* to_string(Ohmicity o)
{
    switch (o) {
    case Ohmicity::Subohmic: return "subohmic";
    case Ohmicity::Ohmic: return "ohmic";
    default: return "superohmic";
    }
}

const char* to_string(Completeness c)
{
    return c == Completeness::Complete ? "complete" : "incomplete";
}

double reorganization_shift(const SpectralDensity& j)
{
    if (j.lambda() == 0.0)
        return 0.0;
    if (j.kind() == CutoffKind::Exponential)
        return 0.25 * j.lambda() * gamma_real(j.s()) * j.omega_c();
    QuadratureOptions opts;
    opts.upper_cutoff = j.integration_cutoff();
    const auto q = integrate_semi_infinite(
        [&](double w) { return w > 0.0 ? j.evaluate(w) / w : 0.0; }, opts);
    return 0.25 * q.value;
}

} // namespace dephaselab
