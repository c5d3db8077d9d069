#pragma once

#include <cmath>
#include <utility>

#include "effsize/effect_sizes.hpp"
#include "effsize/errors.hpp"
#include "effsize/noncentral_t.hpp"
#include "effsize/special_functions.hpp"

namespace effsize {

struct CiRequest {
    double alpha = 0.05;            // two-sided type I error rate
    double ncp_tolerance = 1e-6;    // absolute tolerance of the ncp bisection
    double bracket_halfwidth = 2.0; // initial bracket half-width around t
};

namespace detail {

inline void validate_ci_request(const CiRequest& req) {
    if (!(req.alpha > 0.0 && req.alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
    if (!(req.ncp_tolerance > 0.0) || !(req.bracket_halfwidth > 0.0)) {
        throw DomainError("ncp_tolerance and bracket_halfwidth must be positive");
    }
}

// Solve nct_cdf(t; df, ncp) = target for ncp. The CDF is strictly
// decreasing in ncp, so an expanding bracket plus bisection is exact.
inline double solve_ncp(double t, DegreesOfFreedom df, double target,
                        const CiRequest& req) {
    constexpr double ncp_cap = 1e4;
    const auto cdf = [&](double ncp) { return nct_cdf(t, df, ncp); };

    double lo = t - req.bracket_halfwidth;
    double step = req.bracket_halfwidth;
    while (cdf(lo) < target) {
        lo -= step;
        step *= 2.0;
        if (std::fabs(lo) > ncp_cap) {
            throw SearchFailureError("ncp bracket expansion exceeded |ncp| = 1e4");
        }
    }
    double hi = t + req.bracket_halfwidth;
    step = req.bracket_halfwidth;
    while (cdf(hi) > target) {
        hi += step;
        step *= 2.0;
        if (std::fabs(hi) > ncp_cap) {
            throw SearchFailureError("ncp bracket expansion exceeded |ncp| = 1e4");
        }
    }
    for (int iter = 0; iter < 200 && hi - lo > req.ncp_tolerance; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) >= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Noncentrality-parameter bounds: ncp_L solves nct_cdf(t; df, ncp) = 1 - alpha/2
// and ncp_H solves nct_cdf(t; df, ncp) = alpha/2. Always ncp_L <= ncp_H.
inline std::pair<double, double> ncp_bounds(double t, DegreesOfFreedom df,
                                            const CiRequest& req = {}) {
    if (!std::isfinite(t)) throw DomainError("ncp_bounds requires finite t");
    detail::validate_ci_request(req);
    const double ncp_low = detail::solve_ncp(t, df, 1.0 - req.alpha / 2.0, req);
    const double ncp_high = detail::solve_ncp(t, df, req.alpha / 2.0, req);
    return {ncp_low, ncp_high};
}

namespace detail {

// Shared tail: scale the ncp interval, apply the J factor for unbiased
// kinds, and restore endpoint order for the reversed statistic. The J
// multiplication happens endpoint-wise on the already-scaled biased
// interval so that unbiased CI == J x biased CI holds bit-exactly.
inline std::pair<double, double> finish_interval(std::pair<double, double> bounds,
                                                 double scale, double j_factor,
                                                 bool reversed) {
    double lower = bounds.first / scale;
    double upper = bounds.second / scale;
    lower *= j_factor;
    upper *= j_factor;
    if (reversed) return {-upper, -lower};
    return {lower, upper};
}

}  // namespace detail

// CI for the two-sample kinds (Hedges' g/d, e biased/unbiased).
inline std::pair<double, double> ci_for_effect(const EffectSizeResult& result,
                                               const SampleSummary& a,
                                               const SampleSummary& b,
                                               const CiRequest& req = {}) {
    detail::validate_ci_request(req);
    const double scale = std::sqrt(effective_n(a, b));
    switch (result.kind) {
        case EffectKind::HedgesG:
        case EffectKind::HedgesD: {
            const double g = hedges_g(a, b).estimate;
            const DegreesOfFreedom df(static_cast<double>(a.n + b.n - 2));
            const double j =
                result.kind == EffectKind::HedgesD ? correction_j(df) : 1.0;
            return detail::finish_interval(ncp_bounds(g * scale, df, req), scale, j,
                                           /*reversed=*/false);
        }
        case EffectKind::EBiased:
        case EffectKind::E: {
            const double t_w = welch_t(a, b);
            const DegreesOfFreedom df = welch_satterthwaite_df(a, b);
            const double j = result.kind == EffectKind::E ? correction_j(df) : 1.0;
            return detail::finish_interval(ncp_bounds(t_w, df, req), scale, j,
                                           /*reversed=*/false);
        }
        case EffectKind::GlassDelta:
            throw DomainError("no confidence interval is defined for Glass' Delta");
        default:
            throw DomainError("one-sample effect kinds need the constant overload");
    }
}

// CI for the one-sample kinds (c biased/unbiased, c').
inline std::pair<double, double> ci_for_effect(const EffectSizeResult& result,
                                               const SampleSummary& a, double constant,
                                               const CiRequest& req = {}) {
    detail::validate_ci_request(req);
    switch (result.kind) {
        case EffectKind::CBiased:
        case EffectKind::C:
        case EffectKind::CPrime: {
            detail::require_two_sample(a, "the");
            if (*a.variance == 0.0) {
                throw DegenerateInputError("c is undefined for zero sample variance");
            }
            const double df_value = static_cast<double>(a.n - 1);
            const double scale = std::sqrt(df_value);
            const double c_biased = (a.mean - constant) / std::sqrt(*a.variance);
            const DegreesOfFreedom df(df_value);
            const double j = result.biased ? 1.0 : correction_j(df);
            return detail::finish_interval(ncp_bounds(c_biased * scale, df, req), scale,
                                           j, result.kind == EffectKind::CPrime);
        }
        default:
            throw DomainError("two-sample effect kinds need the two-group overload");
    }
}

inline EffectSizeResult& attach_ci(EffectSizeResult& result, const SampleSummary& a,
                                   const SampleSummary& b, const CiRequest& req = {}) {
    result.ci = ci_for_effect(result, a, b, req);
    result.alpha = req.alpha;
    return result;
}

inline EffectSizeResult& attach_ci(EffectSizeResult& result, const SampleSummary& a,
                                   double constant, const CiRequest& req = {}) {
    result.ci = ci_for_effect(result, a, constant, req);
    result.alpha = req.alpha;
    return result;
}

}  // namespace effsize
