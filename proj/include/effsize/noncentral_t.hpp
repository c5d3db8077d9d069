#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "effsize/errors.hpp"
#include "effsize/special_functions.hpp"

namespace effsize {

struct NoncentralTParams {
    DegreesOfFreedom df;
    double ncp = 0.0;
};

namespace detail {

inline double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

// Continued fraction for the regularized incomplete beta function,
// modified Lentz algorithm. Converges fast for x < (a+1)/(a+b+2).
inline double incomplete_beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 500;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
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
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw SearchFailureError("incomplete beta continued fraction did not converge");
}

// Regularized incomplete beta function I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * incomplete_beta_cf(a, b, x) / a;
    }
    return 1.0 - front * incomplete_beta_cf(b, a, 1.0 - x) / b;
}

// Noncentral t CDF for t >= 0 as a Poisson mixture of incomplete beta
// functions,
//
//   P(T <= t) = Phi(-ncp) + 1/2 sum_j [ p_j I_x(j+1/2, df/2)
//                                     + q_j I_x(j+1,  df/2) ],
//
// x = t^2/(t^2+df), p_j and q_j Poisson-type weights in lambda = ncp^2/2.
// Requires lambda small enough that exp(-lambda) does not underflow;
// callers switch to the quadrature path above that.
inline double nct_cdf_series(double t, double df, double ncp) {
    const double x = t * t / (t * t + df);
    if (x <= 0.0) return normal_cdf(-ncp);
    const double lambda = 0.5 * ncp * ncp;
    const double half_df = 0.5 * df;

    const double log_x = std::log(x);
    const double log_y = std::log1p(-x);
    double p = std::exp(-lambda);
    double q = ncp * std::numbers::sqrt2 * std::numbers::inv_sqrtpi * p;
    double a_term = incomplete_beta(0.5, half_df, x);
    double b_term = -std::expm1(half_df * log_y);
    double ta = 2.0 * std::exp(0.5 * log_x + half_df * log_y - log_beta(0.5, half_df));
    double tb = half_df * std::exp(log_x + half_df * log_y);

    double sum = p * a_term + q * b_term;
    const int j_max = static_cast<int>(lambda + 10.0 * std::sqrt(lambda + 1.0)) + 80;
    for (int j = 1; j <= j_max; ++j) {
        a_term = std::max(a_term - ta, 0.0);
        ta *= x * (j - 0.5 + half_df) / (j + 0.5);
        b_term = std::max(b_term - tb, 0.0);
        tb *= x * (j + half_df) / (j + 1.0);
        p *= lambda / j;
        q *= lambda / (j + 0.5);
        sum += p * a_term + q * b_term;
        if (j > lambda && p * a_term + std::fabs(q) * b_term < 1e-16) break;
    }
    return clamp_probability(normal_cdf(-ncp) + 0.5 * sum);
}

// Gauss-Kronrod 15(7) nodes and weights (QUADPACK dqk15).
inline constexpr double kGk15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0,
};
inline constexpr double kGk15Weights[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278,
};
inline constexpr double kGauss7Weights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
};

template <typename F>
inline void gauss_kronrod_15(const F& f, double a, double b, double& kronrod,
                             double& gauss) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    kronrod = kGk15Weights[7] * f(mid);
    gauss = kGauss7Weights[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGk15Nodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kGk15Weights[i] * fsum;
        if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
}

template <typename F>
inline double adaptive_gk15(const F& f, double a, double b, double tol, int depth = 0) {
    double k = 0.0, g = 0.0;
    gauss_kronrod_15(f, a, b, k, g);
    if (std::fabs(k - g) <= tol || depth >= 60) return k;
    const double mid = 0.5 * (a + b);
    return adaptive_gk15(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_gk15(f, mid, b, 0.5 * tol, depth + 1);
}

// Noncentral t CDF through the scaled-chi mixture
//
//   P(T <= t) = int_0^inf Phi(t x - ncp) h_df(x) dx,
//   h_df(x) = 2 (df/2)^{df/2} x^{df-1} exp(-df x^2/2) / Gamma(df/2),
//
// integrated adaptively. Used where the series' leading Poisson weight
// would underflow (|ncp| > ~34.6); valid for any t and ncp. The integrand
// has two characteristic scales, the chi peak of width ~1/sqrt(df) around
// its mode and the Phi transition layer of width ~1/|t| around ncp/t, so
// the panels are seeded at both before the adaptive refinement.
inline double nct_cdf_quadrature(double t, double df, double ncp) {
    const double half_df = 0.5 * df;
    const double log_norm = std::numbers::ln2 + half_df * std::log(half_df) - log_gamma(half_df);
    const double mode = df > 1.0 ? std::sqrt((df - 1.0) / df) : 0.0;
    const double spread = 45.0 / std::sqrt(df);
    const double hi = mode + spread;
    const double lo = std::max(0.0, mode - spread);

    double points[32];
    int count = 0;
    points[count++] = lo;
    points[count++] = hi;
    constexpr double kOffsets[6] = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    const auto add = [&](double x) {
        if (x > lo && x < hi) points[count++] = x;
    };
    add(mode);
    for (double k : kOffsets) {
        add(mode - k / std::sqrt(df));
        add(mode + k / std::sqrt(df));
    }
    if (t != 0.0) {
        const double crossing = ncp / t;
        add(crossing);
        for (double k : kOffsets) {
            add(crossing - k / std::fabs(t));
            add(crossing + k / std::fabs(t));
        }
    }
    std::sort(points, points + count);

    double total = 0.0;
    if (df >= 1.0) {
        const auto integrand = [&](double x) {
            if (x <= 0.0) return 0.0;
            const double log_density =
                log_norm + (df - 1.0) * std::log(x) - half_df * x * x;
            if (log_density < -760.0) return 0.0;
            return normal_cdf(t * x - ncp) * std::exp(log_density);
        };
        for (int i = 0; i + 1 < count; ++i) {
            if (points[i + 1] - points[i] < 1e-14) continue;
            total += adaptive_gk15(integrand, points[i], points[i + 1], 1e-13);
        }
    } else {
        // df < 1: the x^{df-1} weight diverges at 0. Substituting u = x^df
        // absorbs it, leaving a bounded smooth integrand on (0, hi^df].
        const double inv_df = 1.0 / df;
        const auto integrand_u = [&](double u) {
            if (u <= 0.0) return 0.0;
            const double x = std::pow(u, inv_df);
            const double log_density = log_norm - std::log(df) - half_df * x * x;
            if (log_density < -760.0) return 0.0;
            return normal_cdf(t * x - ncp) * std::exp(log_density);
        };
        for (int i = 0; i + 1 < count; ++i) {
            const double u_lo = std::pow(points[i], df);
            const double u_hi = std::pow(points[i + 1], df);
            if (u_hi - u_lo < 1e-14) continue;
            total += adaptive_gk15(integrand_u, u_lo, u_hi, 1e-13);
        }
    }
    return clamp_probability(total);
}

inline double nct_cdf_nonnegative_t(double t, double df, double ncp) {
    if (0.5 * ncp * ncp <= 600.0) return nct_cdf_series(t, df, ncp);
    return nct_cdf_quadrature(t, df, ncp);
}

}  // namespace detail

// Student t CDF via the regularized incomplete beta relation,
// P(T <= t) = 1 - I_{df/(df+t^2)}(df/2, 1/2) / 2 for t >= 0.
inline double central_t_cdf(double t, DegreesOfFreedom df) {
    if (!std::isfinite(t)) throw DomainError("central_t_cdf requires finite t");
    const double v = df.value();
    const double p = 0.5 * detail::incomplete_beta(0.5 * v, 0.5, v / (v + t * t));
    return t <= 0.0 ? p : 1.0 - p;
}

// Cumulative distribution function of the noncentral t distribution.
// Absolute error <= 1e-8 for df in [1, 1000], |ncp| <= 40, |t| <= 60
// (in practice much tighter; see the tests). Strictly decreasing in ncp,
// non-decreasing in t.
inline double nct_cdf(double t, const NoncentralTParams& params) {
    if (!std::isfinite(t)) throw DomainError("nct_cdf requires finite t");
    if (!std::isfinite(params.ncp)) throw DomainError("nct_cdf requires finite ncp");
    const double v = params.df.value();
    if (params.ncp == 0.0) return central_t_cdf(t, params.df);
    if (t < 0.0) {
        return detail::clamp_probability(
            1.0 - detail::nct_cdf_nonnegative_t(-t, v, -params.ncp));
    }
    return detail::nct_cdf_nonnegative_t(t, v, params.ncp);
}

inline double nct_cdf(double t, DegreesOfFreedom df, double ncp) {
    return nct_cdf(t, NoncentralTParams{df, ncp});
}

}  // namespace effsize
