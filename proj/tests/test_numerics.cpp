#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dephaselab/numerics.hpp"
#include "dephaselab/special_functions.hpp"

#include <cmath>

using namespace dephaselab;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

double one_minus_cos_kernel(double w, double t)
{
    const double wt = w * t;
    if (std::fabs(wt) < 1e-4)
        return 0.5 * t * t * (1.0 - wt * wt / 12.0);
    const double s = std::sin(0.5 * wt);
    return 2.0 * s * s / (w * w);
}
} // namespace

TEST_CASE("finite rule sanity: polynomials and weight sums")
{
    // K15 integrates degree <= 22 exactly, the embedded G7 degree <= 13
    auto r = integrate_finite([](double x) { return x * x * x; }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(0.25).epsilon(1e-15));
    r = integrate_finite([](double x) { return std::pow(x, 20.0); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0 / 21.0).epsilon(1e-14));
    r = integrate_finite([](double) { return 1.0; }, -1.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("semi-infinite: exponential integral")
{
    const auto r =
        integrate_semi_infinite([](double w) { return std::exp(-w); });
    CHECK(std::fabs(r.value - 1.0) <= 1e-12);
    CHECK(r.error_estimate >= std::fabs(r.value - 1.0));
    CHECK(r.segments_used >= 1);
}

TEST_CASE("semi-infinite: ohmic vacuum integrand at t = 1")
{
    QuadratureOptions o;
    o.oscillation_period = 2.0 * kPi;
    o.upper_cutoff = 45.0;
    const auto r = integrate_semi_infinite(
        [](double w) {
            return w * std::exp(-w) * one_minus_cos_kernel(w, 1.0);
        },
        o);
    CHECK(r.value == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("semi-infinite: e^-w sin(w)/w = pi/4")
{
    QuadratureOptions o;
    o.oscillation_period = 2.0 * kPi;
    const auto r = integrate_semi_infinite(
        [](double w) { return w > 0.0 ? std::exp(-w) * std::sin(w) / w : 1.0; },
        o);
    CHECK(r.value == doctest::Approx(kPi / 4.0).epsilon(1e-12));
}

TEST_CASE("error estimate bounds the true error on a known corpus")
{
    struct Case {
        std::function<double(double)> f;
        double exact;
        std::optional<double> period;
    };
    const double g32 = std::exp(ln_gamma_real(1.5));
    const double g12 = std::exp(ln_gamma_real(0.5));
    const std::vector<Case> corpus = {
        {[](double w) { return std::exp(-w); }, 1.0, {}},
        {[](double w) { return w * std::exp(-w); }, 1.0, {}},
        {[](double w) { return w * w * std::exp(-w); }, 2.0, {}},
        {[](double w) { return std::exp(-w) * std::sin(w); }, 0.5, 2 * kPi},
        {[](double w) { return std::exp(-w) * std::cos(w); }, 0.5, 2 * kPi},
        {[](double w) { return std::exp(-w * w); }, 0.5 * std::sqrt(kPi), {}},
        {[](double w) { return w > 0 ? std::exp(-w) * std::sin(w) / w : 1.0; },
         kPi / 4.0, 2 * kPi},
        {[g32](double w) { return std::sqrt(w) * std::exp(-w); }, g32, {}},
        {[g12](double w) { return w > 0 ? std::exp(-w) / std::sqrt(w) : 0.0; },
         g12, {}},
        {[](double w) { return w * std::exp(-w) * one_minus_cos_kernel(w, 3.0); },
         0.5 * std::log(10.0), 2 * kPi / 3.0},
    };
    for (const auto& c : corpus) {
        QuadratureOptions o;
        o.oscillation_period = c.period;
        const auto r = integrate_semi_infinite(c.f, o);
        const double true_err = std::fabs(r.value - c.exact);
        CHECK(true_err <= std::max(r.error_estimate, 5e-13 * std::fabs(c.exact)));
        CHECK(true_err <= 1e-9 * std::fabs(c.exact));
    }
}

TEST_CASE("linearity within combined tolerances")
{
    auto f = [](double w) { return std::exp(-w); };
    auto g = [](double w) { return w * std::exp(-1.5 * w); };
    const double a = 2.5, b = -0.75;
    const auto rf = integrate_semi_infinite(f);
    const auto rg = integrate_semi_infinite(g);
    const auto rc = integrate_semi_infinite(
        [&](double w) { return a * f(w) + b * g(w); });
    CHECK(rc.value == doctest::Approx(a * rf.value + b * rg.value)
                          .epsilon(1e-11));
}

TEST_CASE("oscillatory far tail via acceleration")
{
    // Phi-type integrand at t = 5000 (tens of thousands of half-periods):
    // int_0^inf e^-w sin(wt)/w dw = atan(t)
    const double t = 5000.0;
    QuadratureOptions o;
    o.oscillation_period = 2.0 * kPi / t;
    o.upper_cutoff = 48.0;
    const auto r = integrate_semi_infinite(
        [t](double w) { return w > 0 ? std::exp(-w) * std::sin(w * t) / w : t; },
        o);
    CHECK(r.value == doctest::Approx(std::atan(t)).epsilon(1e-10));
}

TEST_CASE("non-finite integrand raises")
{
    CHECK_THROWS_AS(integrate_finite(
                        [](double x) {
                            return x > 0.4 && x < 0.6
                                       ? std::numeric_limits<double>::quiet_NaN()
                                       : 1.0;
                        },
                        0.0, 1.0),
                    NonConvergenceError);
}

TEST_CASE("non-decaying integrand raises")
{
    CHECK_THROWS_AS(
        integrate_semi_infinite([](double w) { return 1.0 / (1.0 + w); }),
        NonConvergenceError);
}

TEST_CASE("sum_series: 1/k^2 to pi^2/6")
{
    const auto r = sum_series([](double k) { return 1.0 / (k * k); });
    CHECK(std::fabs(r.value - kPi * kPi / 6.0) <= 1e-10);
    CHECK(r.tail_bound <= 1e-10 * r.value);
}

TEST_CASE("sum_series: zero terms")
{
    const auto r = sum_series([](double) { return 0.0; });
    CHECK(r.value == 0.0);
}

TEST_CASE("sum_series: (k+0.1)^-2 equals hurwitz zeta(2, 1.1)")
{
    const auto r =
        sum_series([](double k) { return std::pow(k + 0.1, -2.0); });
    CHECK(r.value == doctest::Approx(hurwitz_zeta(2.0, 1.1)).epsilon(1e-9));
}

TEST_CASE("sum_series: geometric terms")
{
    const auto r = sum_series([](double k) { return std::pow(0.5, k); });
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("sum_series truncation error at k_max")
{
    CHECK_THROWS_AS(
        sum_series([](double k) { return 1.0 / (k * k); }, 1e-14, 10),
        TruncationError);
}

TEST_CASE("abel_limit: constant")
{
    const auto eps = default_abel_eps();
    const auto r = abel_limit([](double) { return 3.25; }, eps);
    CHECK(r.converged);
    CHECK(r.limit == doctest::Approx(3.25).epsilon(1e-10));
}

TEST_CASE("abel_limit: arctan tends to pi/2")
{
    const auto eps = default_abel_eps();
    const auto r = abel_limit([](double t) { return std::atan(t); }, eps);
    CHECK(r.converged);
    CHECK(std::fabs(r.limit - kPi / 2.0) <= 1e-4);
    CHECK(r.values.size() == eps.size());
}

TEST_CASE("abel_limit: oscillatory input is flagged, not thrown")
{
    const auto eps = default_abel_eps();
    const auto r = abel_limit([](double t) { return std::sin(0.7 * t); }, eps);
    CHECK_FALSE(r.converged);
}

TEST_CASE("abel_limit: power-law growth is flagged")
{
    const auto eps = default_abel_eps();
    const auto r =
        abel_limit([](double t) { return std::pow(1.0 + t, 0.5); }, eps);
    CHECK_FALSE(r.converged);
}

TEST_CASE("pairwise_sum equals exact rational sums and is order-fixed")
{
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 1.0 / (1.0 + static_cast<double>(i));
    const double a = pairwise_sum(v);
    const double b = pairwise_sum(v);
    CHECK(a == b); // bitwise deterministic
    double naive = 0.0;
    for (double x : v)
        naive += x;
    CHECK(a == doctest::Approx(naive).epsilon(1e-13));
}
