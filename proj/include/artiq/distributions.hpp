#pragma once

// Distribution functions shared by the p-value recomputation and the
// group-comparison tests: regularized incomplete beta and gamma functions,
// and the CDFs and upper tails of the normal, t, F, chi-square and
// studentized range distributions.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "artiq/error.hpp"

namespace artiq::dist {

namespace detail {

inline constexpr double kEps = 1e-16;
inline constexpr int kMaxIter = 100000;

// lgamma(x) - Stirling approximation, for x >= 10.
inline double lgamma_correction(double x) {
    const double r = 1.0 / x, r2 = r * r;
    return r * (1.0 / 12 + r2 * (-1.0 / 360 + r2 * (1.0 / 1260 + r2 * (-1.0 / 1680 + r2 * (1.0 / 1188 +
           r2 * (-691.0 / 360360 + r2 * (1.0 / 156)))))));
}

// log B(a, b). Large arguments go through the Stirling correction terms so
// that the big lgamma values never cancel.
inline double log_beta(double a, double b) {
    const double p = std::min(a, b), q = std::max(a, b);
    if (q < 10) return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
    const double corr_q = lgamma_correction(q) - lgamma_correction(p + q);
    const double ratio = p / (p + q);
    if (p >= 10) {
        return -0.5 * std::log(q) + 0.918938533204672742 + lgamma_correction(p) + corr_q +
               (p - 0.5) * std::log(ratio) + q * std::log1p(-ratio);
    }
    return std::lgamma(p) + corr_q + p - p * std::log(p + q) + (q - 0.5) * std::log1p(-ratio);
}

inline double log_of(double x, double one_minus_x) {
    return one_minus_x < 0.5 ? std::log1p(-one_minus_x) : std::log(x);
}

// Continued fraction for I_x(a, b) (modified Lentz).
inline double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    return h;
}

// Series for the lower regularized gamma P(a, x).
inline double gamma_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for the upper regularized gamma Q(a, x).
inline double gamma_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

inline void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

} // namespace detail

/// Regularized incomplete beta I_x(a, b). `y` must equal 1 - x; passing it
/// separately keeps precision when x is close to 1.
inline double ibeta(double a, double b, double x, double y) {
    detail::require(a > 0 && b > 0, "ibeta: shape parameters must be positive");
    detail::require(x >= 0 && x <= 1, "ibeta: x outside [0, 1]");
    if (x == 0) return 0.0;
    if (y == 0) return 1.0;
    const double front = std::exp(a * detail::log_of(x, y) + b * detail::log_of(y, x) - detail::log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
    return 1.0 - front * detail::beta_cf(b, a, y) / b;
}

inline double ibeta(double a, double b, double x) { return ibeta(a, b, x, 1.0 - x); }

/// Complement 1 - I_x(a, b) = I_{1-x}(b, a), without cancellation.
inline double ibetac(double a, double b, double x, double y) { return ibeta(b, a, y, x); }

/// Lower regularized gamma P(a, x).
inline double gamma_p(double a, double x) {
    detail::require(a > 0, "gamma_p: shape must be positive");
    detail::require(x >= 0, "gamma_p: x must be non-negative");
    if (x == 0) return 0.0;
    if (x < a + 1.0) return detail::gamma_series(a, x);
    return 1.0 - detail::gamma_cf(a, x);
}

/// Upper regularized gamma Q(a, x).
inline double gamma_q(double a, double x) {
    detail::require(a > 0, "gamma_q: shape must be positive");
    detail::require(x >= 0, "gamma_q: x must be non-negative");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_series(a, x);
    return detail::gamma_cf(a, x);
}

// --- normal ----------------------------------------------------------------

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// --- Student t -------------------------------------------------------------

/// P(T > |x|) for T ~ t(df); x = 0 gives 0.5.
inline double student_t_tail(double x, double df) {
    detail::require(df > 0, "t: df must be positive");
    if (std::isinf(x)) return 0.0;
    const double x2 = x * x;
    // I_{df/(df+x^2)}(df/2, 1/2) / 2, with both arguments formed directly
    return 0.5 * ibeta(df / 2.0, 0.5, df / (df + x2), x2 / (df + x2));
}

inline double student_t_cdf(double x, double df) {
    const double tail = student_t_tail(x, df);
    return x > 0 ? 1.0 - tail : tail;
}

inline double student_t_sf(double x, double df) {
    const double tail = student_t_tail(x, df);
    return x > 0 ? tail : 1.0 - tail;
}

// --- F ---------------------------------------------------------------------

inline double f_sf(double x, double df1, double df2) {
    detail::require(df1 > 0 && df2 > 0, "F: dfs must be positive");
    if (x <= 0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double denom = df2 + df1 * x;
    return ibeta(df2 / 2.0, df1 / 2.0, df2 / denom, df1 * x / denom);
}

inline double f_cdf(double x, double df1, double df2) {
    detail::require(df1 > 0 && df2 > 0, "F: dfs must be positive");
    if (x <= 0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double denom = df2 + df1 * x;
    return ibeta(df1 / 2.0, df2 / 2.0, df1 * x / denom, df2 / denom);
}

// --- chi-square ------------------------------------------------------------

inline double chi2_sf(double x, double df) {
    detail::require(df > 0, "chi2: df must be positive");
    if (x <= 0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return gamma_q(df / 2.0, x / 2.0);
}

inline double chi2_cdf(double x, double df) {
    detail::require(df > 0, "chi2: df must be positive");
    if (x <= 0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return gamma_p(df / 2.0, x / 2.0);
}

// --- studentized range -----------------------------------------------------

namespace detail {

template <int N>
struct GaussLegendre {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    GaussLegendre() {
        for (int i = 0; i < N; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int n = 2; n <= N; ++n) {
                    const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) break;
            }
            nodes[static_cast<std::size_t>(i)] = x;
            weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

inline const GaussLegendre<16>& gl16() {
    static const GaussLegendre<16> rule;
    return rule;
}

// Composite 16-point Gauss-Legendre over [a, b] split into `panels`.
template <class F>
double integrate(F&& f, double a, double b, int panels) {
    const auto& gl = gl16();
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < 16; ++i) s += gl.weights[i] * f(mid + 0.5 * h * gl.nodes[i]);
        total += 0.5 * h * s;
    }
    return total;
}

// P(Phi(z) - Phi(z - w)) evaluated without cancellation in either tail.
inline double normal_band(double z, double w) {
    if (z > 0) return 0.5 * (std::erfc((z - w) / std::numbers::sqrt2) - std::erfc(z / std::numbers::sqrt2));
    return 0.5 * (std::erfc(-z / std::numbers::sqrt2) - std::erfc(-(z - w) / std::numbers::sqrt2));
}

// CDF of the range of k independent standard normals.
inline double normal_range_cdf(double w, int k) {
    if (w <= 0) return 0.0;
    const double v = integrate(
        [&](double z) { return normal_pdf(z) * std::pow(normal_band(z, w), k - 1); }, -8.5, 8.5, 10);
    return std::clamp(k * v, 0.0, 1.0);
}

} // namespace detail

/// P(Q <= q) for the studentized range of k means with `df` error degrees
/// of freedom. Integrates the normal-range CDF against the density of
/// s = sqrt(chi2_df / df); absolute accuracy is about 1e-6 or better.
inline double studentized_range_cdf(double q, int k, double df) {
    detail::require(k >= 2, "studentized range: k must be >= 2");
    detail::require(df > 0, "studentized range: df must be positive");
    if (q <= 0) return 0.0;
    if (std::isinf(q)) return 1.0;
    if (df > 50000) return detail::normal_range_cdf(q, k);

    const double half = df / 2.0;
    const double log_norm = std::log(2.0) + half * std::log(half) - std::lgamma(half);
    auto density = [&](double s) {
        if (s <= 0) return 0.0;
        return std::exp(log_norm + (df - 1.0) * std::log(s) - half * s * s);
    };
    const double spread = 10.0 / std::sqrt(df);
    const double lo = std::max(0.0, 1.0 - spread);
    const double hi = 1.0 + spread + (df < 4 ? 4.0 : 0.0);
    const int panels = 12;
    const double mass = detail::integrate(density, lo, hi, panels);
    const double value = detail::integrate(
        [&](double s) {
            const double d = density(s);
            return d < 1e-300 ? 0.0 : d * detail::normal_range_cdf(q * s, k);
        },
        lo, hi, panels);
    return std::clamp(value / mass, 0.0, 1.0);
}

inline double studentized_range_sf(double q, int k, double df) {
    return 1.0 - studentized_range_cdf(q, k, df);
}

// --- dispatcher ------------------------------------------------------------

enum class Kind { t, F, chi2, normal, studentized_range };

struct Params {
    double df1 = 0;   // t, chi2: df; F: numerator df; studentized range: error df
    double df2 = 0;   // F: denominator df
    int groups = 0;   // studentized range: number of means k
};

/// CDF of the given distribution at x. Throws DomainError on invalid
/// parameters.
inline double cdf(Kind kind, const Params& p, double x) {
    switch (kind) {
    case Kind::t: return student_t_cdf(x, p.df1);
    case Kind::F: return f_cdf(x, p.df1, p.df2);
    case Kind::chi2: return chi2_cdf(x, p.df1);
    case Kind::normal: return normal_cdf(x);
    case Kind::studentized_range: return studentized_range_cdf(x, p.groups, p.df1);
    }
    throw DomainError("unknown distribution");
}

} // namespace artiq::dist
