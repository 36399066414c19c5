#include "dephaselab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace dephaselab {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
// Odd-indexed abscissae are the Gauss nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a = 0.0, b = 0.0;
    double value = 0.0;
    double err = 0.0;
    int depth = 0;
    bool operator<(const Segment& o) const { return err < o.err; }
};

[[noreturn]] void throw_nonfinite(double x)
{
    std::ostringstream os;
    os << "quadrature: integrand returned a non-finite value at x = " << x;
    throw NonConvergenceError(os.str());
}

Segment gk15(const std::function<double(double)>& f, double a, double b,
             int depth)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[2 * i] = f(c - h * kXgk[i]);
        fv[2 * i + 1] = f(c + h * kXgk[i]);
        if (!std::isfinite(fv[2 * i]))
            throw_nonfinite(c - h * kXgk[i]);
        if (!std::isfinite(fv[2 * i + 1]))
            throw_nonfinite(c + h * kXgk[i]);
    }
    fv[14] = f(c);
    if (!std::isfinite(fv[14]))
        throw_nonfinite(c);

    double kron = kWgk[7] * fv[14];
    for (int i = 0; i < 7; ++i)
        kron += kWgk[i] * (fv[2 * i] + fv[2 * i + 1]);
    // the embedded Gauss rule lives on the odd-indexed Kronrod nodes
    double gauss = kWg[3] * fv[14];
    for (int i = 0; i < 3; ++i)
        gauss += kWg[i] * (fv[4 * i + 2] + fv[4 * i + 3]);

    Segment s;
    s.a = a;
    s.b = b;
    s.value = kron * h;
    s.err = std::fabs((kron - gauss) * h);
    s.depth = depth;
    return s;
}

// Global adaptive refinement over an initial segmentation.  The heap lives
// in a plain vector so value and error can be re-summed exactly; a running
// error total would drift after many split/merge updates and stall the
// termination test.
QuadratureResult adapt(const std::function<double(double)>& f,
                       std::vector<double> pts, double rel_tol,
                       double abs_tol, int max_segments)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2)
        return {};

    std::vector<Segment> heap;   // max-heap by error
    std::vector<Segment> frozen; // machine-width, cannot improve
    int used = 0;

    // A segment is at the refinement floor when its width is at the float
    // resolution of its position; panels abutting zero stay splittable all
    // the way down (integrable endpoint singularities need that).
    auto push = [&](Segment s) {
        const double pos = std::max(std::fabs(s.a), std::fabs(s.b));
        if (s.b - s.a < 5e-16 * pos || s.depth > 600) {
            frozen.push_back(s);
        } else {
            heap.push_back(s);
            std::push_heap(heap.begin(), heap.end());
        }
    };

    auto totals = [&]() {
        double v = 0.0, e = 0.0;
        for (const Segment& s : heap) {
            v += s.value;
            e += s.err;
        }
        for (const Segment& s : frozen) {
            v += s.value;
            e += s.err;
        }
        return std::pair<double, double>(v, e);
    };

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        push(gk15(f, pts[i], pts[i + 1], 0));
        ++used;
    }

    while (true) {
        const auto [value, err] = totals();
        const double target = std::max(abs_tol, rel_tol * std::fabs(value));
        if (err <= target || heap.empty())
            return {value, err, used};
        if (used >= max_segments) {
            if (err > 1e3 * std::max(target, 1e-300))
                throw NonConvergenceError(
                    "quadrature: segment budget exhausted before convergence");
            return {value, err, used};
        }
        // split a batch of the worst segments between exact re-summations
        const int batch = std::min<int>(8, max_segments - used);
        for (int i = 0; i < batch && !heap.empty(); ++i) {
            std::pop_heap(heap.begin(), heap.end());
            const Segment worst = heap.back();
            heap.pop_back();
            const double mid = 0.5 * (worst.a + worst.b);
            push(gk15(f, worst.a, mid, worst.depth + 1));
            push(gk15(f, mid, worst.b, worst.depth + 1));
            used += 2;
        }
    }
}

std::vector<double> geometric_seeds(double x_max)
{
    return {0.0,          x_max * 1e-9, x_max * 1e-6, x_max * 1e-4,
            x_max * 1e-2, x_max * 0.1,  x_max * 0.4,  x_max};
}

double detect_cutoff(const std::function<double(double)>& f)
{
    double x = 1.0;
    double best = 0.0; // max of |f(x)| * x seen so far
    for (int i = 0; i < 60; ++i) {
        double local = 0.0;
        for (double m : {1.0, 1.17, 1.43, 1.77})
            local = std::max(local, std::fabs(f(x * m)));
        best = std::max(best, local * x);
        if (local * x < 1e-18 + 1e-16 * best)
            return 2.0 * x;
        x *= 2.0;
    }
    throw NonConvergenceError(
        "quadrature: integrand does not decay on [0, inf)");
}

// Iterated averaging of partial sums (Euler / van Wijngaarden style):
// returns the accelerated estimate and a stage-difference error measure.
std::pair<double, double> average_partial_sums(std::vector<double> p)
{
    double prev = p.back();
    double delta = std::fabs(prev);
    while (p.size() >= 2) {
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            p[i] = 0.5 * (p[i] + p[i + 1]);
        p.pop_back();
        delta = std::fabs(p.back() - prev);
        prev = p.back();
    }
    return {prev, delta};
}

// Far tail of an oscillatory integrand: sum half-period segment integrals,
// accelerating once the signs alternate, or exiting early on geometric
// decay of same-sign segments.
QuadratureResult oscillatory_tail(const std::function<double(double)>& f,
                                  double x0, double h, double x_max,
                                  double rel_tol, double abs_tol,
                                  double outer_value)
{
    const long n_total = static_cast<long>(std::ceil((x_max - x0) / h));
    double total = 0.0, err = 0.0;
    int used = 0;

    std::vector<double> partials; // ring of recent partial sums
    constexpr std::size_t kWindow = 96;
    std::vector<double> recent;   // recent segment values

    double a = x0;
    for (long j = 0; j < n_total; ++j) {
        const double b = std::min(a + h, x_max);
        Segment s1 = gk15(f, a, 0.5 * (a + b), 0);
        Segment s2 = gk15(f, 0.5 * (a + b), b, 0);
        const double sj = s1.value + s2.value;
        total += sj;
        err += s1.err + s2.err;
        used += 2;
        a = b;

        partials.push_back(total);
        if (partials.size() > kWindow)
            partials.erase(partials.begin());
        recent.push_back(sj);
        if (recent.size() > 8)
            recent.erase(recent.begin());

        if (recent.size() < 8 || (j % 8) != 7)
            continue;
        const double target = std::max(
            abs_tol, rel_tol * std::fabs(outer_value + total));

        bool alternating = true, decreasing = true, same_sign = true;
        for (std::size_t i = 1; i < recent.size(); ++i) {
            alternating &= (recent[i] * recent[i - 1] < 0.0);
            same_sign &= (recent[i] * recent[i - 1] > 0.0);
            decreasing &=
                (std::fabs(recent[i]) <= std::fabs(recent[i - 1]) * 1.0001);
        }
        if (alternating && partials.size() >= 16) {
            auto [est, delta] = average_partial_sums(partials);
            if (delta <= 0.25 * target)
                return {est, err + delta, used};
        }
        if (same_sign && decreasing) {
            const double r = std::fabs(recent.back() / recent.front());
            const double ratio = std::pow(r, 1.0 / (recent.size() - 1.0));
            if (ratio < 0.9999) {
                const double bound =
                    std::fabs(recent.back()) * ratio / (1.0 - ratio);
                if (bound <= target)
                    return {total + recent.back() * ratio / (1.0 - ratio),
                            err + bound, used};
            }
        }
    }
    return {total, err, used};
}

} // namespace

QuadratureResult integrate_finite(const std::function<double(double)>& f,
                                  double a, double b, double rel_tol,
                                  double abs_tol,
                                  std::span<const double> breakpoints,
                                  int max_segments)
{
    if (!(b > a))
        return {};
    std::vector<double> pts{a, b};
    for (double p : breakpoints)
        if (p > a && p < b)
            pts.push_back(p);
    return adapt(f, std::move(pts), rel_tol, abs_tol, max_segments);
}

QuadratureResult integrate_semi_infinite(
    const std::function<double(double)>& f, const QuadratureOptions& opts)
{
    const double x_max =
        opts.upper_cutoff ? *opts.upper_cutoff : detect_cutoff(f);
    if (!(x_max > 0.0))
        return {};

    if (!opts.oscillation_period) {
        return adapt(f, geometric_seeds(x_max), opts.rel_tol, opts.abs_tol,
                     opts.max_segments);
    }

    const double h = 0.5 * *opts.oscillation_period;
    const long n_half = static_cast<long>(std::ceil(x_max / h));
    if (n_half <= 2) {
        return adapt(f, geometric_seeds(x_max), opts.rel_tol, opts.abs_tol,
                     opts.max_segments);
    }

    if (n_half <= 8192) {
        std::vector<double> pts = geometric_seeds(x_max);
        for (long j = 1; j < n_half; ++j)
            pts.push_back(j * h);
        return adapt(f, std::move(pts), opts.rel_tol, opts.abs_tol,
                     std::max(opts.max_segments, static_cast<int>(4 * n_half)));
    }

    // Large segment count: adaptive head, then accelerated tail summation.
    const double head_end = 64.0 * h;
    std::vector<double> head_pts = geometric_seeds(head_end);
    for (long j = 1; j < 64; ++j)
        head_pts.push_back(j * h);
    QuadratureResult head = adapt(f, std::move(head_pts), 0.1 * opts.rel_tol,
                                  opts.abs_tol, opts.max_segments);
    QuadratureResult tail =
        oscillatory_tail(f, head_end, h, x_max, opts.rel_tol, opts.abs_tol,
                         head.value);
    return {head.value + tail.value, head.error_estimate + tail.error_estimate,
            head.segments_used + tail.segments_used};
}

SeriesResult sum_series(const std::function<double(double)>& term,
                        double rel_tol, long k_max)
{
    if (k_max < 1)
        throw std::invalid_argument("sum_series: k_max must be >= 1");

    double partial = 0.0;
    long k = 0;
    long checkpoint = std::min<long>(32, k_max);

    while (true) {
        while (k < checkpoint) {
            ++k;
            const double t = term(static_cast<double>(k));
            if (!std::isfinite(t))
                throw NonConvergenceError("sum_series: non-finite term");
            partial += t;
        }

        // Euler-Maclaurin tail at N = k:
        //   sum_{j>N} g(j) = int_N^inf g - g(N)/2 - g'(N)/12 + O(g'''(N))
        const double N = static_cast<double>(k);
        const double gN = term(N);
        const double gm2 = term(N - 2.0), gm1 = term(N - 1.0);
        const double gp1 = term(N + 1.0), gp2 = term(N + 2.0);
        // five-point first derivative keeps the stencil error below the
        // retained g''' correction
        const double gp = (8.0 * (gp1 - gm1) - (gp2 - gm2)) / 12.0;
        const double gppp = 0.5 * (gp2 - 2.0 * gp1 + 2.0 * gm1 - gm2);

        // Tail integral over doubling octaves, one K15 panel each.
        double tail_int = 0.0;
        double a = N;
        bool octaves_ok = false;
        for (int oct = 0; oct < 400; ++oct) {
            const Segment s = gk15(term, a, 2.0 * a, 0);
            tail_int += s.value;
            a *= 2.0;
            if (std::fabs(s.value) <
                1e-17 * (std::fabs(partial + tail_int) + 1e-300)) {
                octaves_ok = true;
                break;
            }
        }

        const double value = partial + tail_int - 0.5 * gN - gp / 12.0;
        double bound = 4.0 * std::fabs(gppp) / 720.0 +
                       1e-15 * std::fabs(partial) +
                       (octaves_ok ? 0.0 : std::fabs(tail_int) * 1e-10);
        if (bound <= rel_tol * std::fabs(value) + 1e-300)
            return {value, bound, k};
        if (k >= k_max)
            throw TruncationError(
                "sum_series: k_max reached before the tail bound met rel_tol");
        checkpoint = std::min(k_max, 2 * checkpoint);
    }
}

std::vector<double> default_abel_eps()
{
    std::vector<double> eps;
    for (int j = 0; j < 8; ++j)
        eps.push_back(0.05 * std::pow(2.0, -j));
    return eps;
}

AbelLimitResult abel_limit(const std::function<double(double)>& f,
                           std::span<const double> eps_sequence,
                           double quad_rel_tol)
{
    if (eps_sequence.size() < 3)
        throw std::invalid_argument(
            "abel_limit: need at least 3 eps values to extrapolate");
    AbelLimitResult res;
    for (double eps : eps_sequence) {
        // truncate where the exponential window is below 1e-16
        const double T = -std::log(1e-16) / eps;
        const std::vector<double> seeds = {
            T * 1e-6, T * 1e-4, T * 1e-3, T * 1e-2, T * 0.1, T * 0.3, T * 0.6};
        const auto q = integrate_finite(
            [&](double t) { return std::exp(-eps * t) * f(t); }, 0.0, T,
            quad_rel_tol, 1e-300, seeds);
        res.values.push_back(eps * q.value);
    }

    // Iterated Aitken delta-squared on the A(eps) sequence.
    std::vector<double> seq = res.values;
    double best = seq.empty() ? 0.0 : seq.back();
    double last_delta = std::fabs(best);
    while (seq.size() >= 3) {
        std::vector<double> next;
        for (std::size_t i = 0; i + 2 < seq.size(); ++i) {
            const double d1 = seq[i + 1] - seq[i];
            const double d2 = seq[i + 2] - seq[i + 1];
            const double den = d2 - d1;
            double v = seq[i + 2];
            if (den != 0.0 && std::isfinite(den))
                v = seq[i + 2] - d2 * d2 / den;
            next.push_back(v);
        }
        if (next.empty() || !std::isfinite(next.back()))
            break;
        last_delta = std::fabs(next.back() - best);
        best = next.back();
        res.extrapolated.push_back(best);
        seq = std::move(next);
    }

    res.limit = best;
    const double scale = std::max(std::fabs(best), 1e-6);
    bool sequence_settled = std::isfinite(best) &&
                            res.extrapolated.size() >= 2 &&
                            last_delta <= 2e-3 * scale;

    // The A(eps) sequence can settle even when f itself keeps oscillating
    // (the Abel mean of sin exists); probe the tail of f directly.
    bool f_settled = true;
    if (sequence_settled && !eps_sequence.empty()) {
        double min_eps = eps_sequence.front();
        for (double e : eps_sequence)
            min_eps = std::min(min_eps, e);
        const double T = -std::log(1e-16) / min_eps;
        std::vector<double> tail;
        for (int i = 0; i < 48; ++i)
            tail.push_back(f(0.25 * T * std::pow(4.0, i / 47.0)));
        double lo = tail[0], hi = tail[0], amax = 0.0;
        for (double v : tail) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            amax = std::max(amax, std::fabs(v));
        }
        int sign_changes = 0, last = 0;
        for (std::size_t i = 1; i < tail.size(); ++i) {
            const double d = tail[i] - tail[i - 1];
            if (std::fabs(d) <= 1e-12 * amax + 1e-300)
                continue;
            const int sign = d > 0.0 ? 1 : -1;
            if (last != 0 && sign != last)
                ++sign_changes;
            last = sign;
        }
        // monotone slow approach is fine; a wandering tail is not
        f_settled = (hi - lo <= 2e-3 * scale) || (sign_changes <= 2);
    }
    res.converged = sequence_settled && f_settled;
    return res;
}

double pairwise_sum(std::span<const double> values)
{
    const std::size_t n = values.size();
    if (n <= 8) {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace dephaselab
