#include "dephaselab/special_functions.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace dephaselab {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;

// Lanczos coefficients, g = 7, n = 9 (Godfrey's set, as used by GSL and
// Boost.Math).  Good for ~15 significant digits on Re(z) > 0.5.
constexpr double kLanczos[9] = {
    0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos sum at z-1; caller guarantees x >= 0.5.
double ln_gamma_lanczos(double x)
{
    const double z = x - 1.0;
    double sum = kLanczos[0];
    for (int i = 1; i < 9; ++i)
        sum += kLanczos[i] / (z + i);
    const double base = z + 7.5;
    return kLnSqrt2Pi + (z + 0.5) * std::log(base) - base + std::log(sum);
}

bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::floor(x);
}

// Stirling coefficients B_{2j} / (2j (2j-1)) for the ln Gamma asymptotic
// series, j = 1..7.  With Re(z) >= 10 the truncation error is < 1e-16.
constexpr double kStirling[7] = {
    8.3333333333333333333e-2,  -2.7777777777777777778e-3,
    7.9365079365079365079e-4,  -5.9523809523809523810e-4,
    8.4175084175084175084e-4,  -1.9175269175269175269e-3,
    6.4102564102564102564e-3};

// 2 Re ln Gamma(x+iy) for x >= 10 via the Stirling series.
double ln_abs_gamma_sq_stirling(double x, double y)
{
    const std::complex<double> z(x, y);
    const double half_ln_r2 = 0.5 * std::log(x * x + y * y);
    const double theta = std::atan2(y, x);
    double re = (x - 0.5) * half_ln_r2 - y * theta - x + kLnSqrt2Pi;

    const std::complex<double> inv = 1.0 / z;
    const std::complex<double> inv2 = inv * inv;
    std::complex<double> p = inv;
    for (double c : kStirling) {
        re += c * p.real();
        p *= inv2;
    }
    return 2.0 * re;
}

// Euler-Maclaurin coefficients B_{2j}/(2j)! for the Hurwitz zeta tail.
constexpr double kZetaEm[13] = {
    8.3333333333333333333e-2,  -1.3888888888888888889e-3,
    3.3068783068783068783e-5,  -8.2671957671957671958e-7,
    2.0876756987868098979e-8,  -5.2841901386874931848e-10,
    1.3382536530684678833e-11, -3.3896802963225828668e-13,
    8.5860620562778445641e-15, -2.1748686985580618730e-16,
    5.5090028283602295152e-18, -1.3954464685812523341e-19,
    3.5347070396294674717e-21};

} // namespace

double ln_gamma_real(double x)
{
    if (!(x > 0.0))
        throw std::domain_error("ln_gamma_real: requires x > 0");
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(kPi / std::sin(kPi * x)) - ln_gamma_lanczos(1.0 - x);
    }
    return ln_gamma_lanczos(x);
}

double gamma_real(double x)
{
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma_real: pole at nonpositive integer");
    if (x > 0.0)
        return std::exp(ln_gamma_real(x));
    // Gamma(x) = pi / (sin(pi x) Gamma(1-x)); sign carried by sin(pi x)
    return kPi / (std::sin(kPi * x) * std::exp(ln_gamma_real(1.0 - x)));
}

double ln_abs_gamma_sq(double x, double y)
{
    if (y == 0.0) {
        if (is_nonpositive_integer(x))
            throw std::domain_error("ln_abs_gamma_sq: pole on the real axis");
        if (x > 0.0)
            return 2.0 * ln_gamma_real(x);
        // |Gamma(x)| = pi / (|sin(pi x)| Gamma(1-x)) for negative non-integers
        return 2.0 * (std::log(kPi) - std::log(std::fabs(std::sin(kPi * x))) -
                      ln_gamma_real(1.0 - x));
    }
    // ln|Gamma(x+iy)|^2 = ln|Gamma(x+n+iy)|^2 - sum_k ln((x+k)^2 + y^2)
    double shift = 0.0;
    double xr = x;
    while (xr < 10.0) {
        shift += std::log(xr * xr + y * y);
        xr += 1.0;
    }
    return ln_abs_gamma_sq_stirling(xr, y) - shift;
}

double hurwitz_zeta(double z, double v)
{
    if (!(z > 1.0))
        throw std::domain_error("hurwitz_zeta: requires z > 1");
    if (!(v > 0.0))
        throw std::domain_error("hurwitz_zeta: requires v > 0");

    // Direct terms until the argument is large enough for the tail series.
    const double a_min = 16.0 + 0.5 * z;
    double sum = 0.0;
    double a = v;
    while (a < a_min) {
        sum += std::pow(a, -z);
        a += 1.0;
    }

    // Euler-Maclaurin tail at a:
    //   a^{1-z}/(z-1) + a^{-z}/2 + sum_j B_{2j}/(2j)! (z)_{2j-1} a^{-z-2j+1}
    const double apz = std::pow(a, -z);
    sum += apz * a / (z - 1.0) + 0.5 * apz;

    double poch = z;           // (z)_{2j-1} built incrementally
    double apow = apz / a;     // a^{-z-2j+1} at j = 1
    const double inv_a2 = 1.0 / (a * a);
    for (int j = 0; j < 13; ++j) {
        const double term = kZetaEm[j] * poch * apow;
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum))
            break;
        poch *= (z + 2 * j + 1) * (z + 2 * j + 2);
        apow *= inv_a2;
    }
    return sum;
}

} // namespace dephaselab
