#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "effsize/errors.hpp"
#include "effsize/special_functions.hpp"

namespace effsize {

// Sufficient statistics of one sample: mean, unbiased variance
// (n-1 denominator), and size. The variance is absent for n = 1.
struct SampleSummary {
    double mean = 0.0;
    std::optional<double> variance;
    std::int64_t n = 0;
};

inline SampleSummary summarize(std::span<const double> samples) {
    if (samples.empty()) throw DomainError("summarize requires at least one observation");
    double sum = 0.0;
    for (double v : samples) sum += v;
    const double mean = sum / static_cast<double>(samples.size());
    if (samples.size() == 1) {
        return SampleSummary{mean, std::nullopt, 1};
    }
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double variance = ss / static_cast<double>(samples.size() - 1);
    return SampleSummary{mean, variance, static_cast<std::int64_t>(samples.size())};
}

enum class EffectKind {
    GlassDelta,
    HedgesG,
    HedgesD,
    EBiased,
    E,
    CBiased,
    C,
    CPrime,
};

// Population parameters the estimators target; ground truth for the
// Monte Carlo harness.
enum class ParameterKind { Delta, EpsilonR, Gamma, DeltaPrimeQ };

struct EffectParameters {
    ParameterKind kind = ParameterKind::Delta;
    double mu1 = 0.0;
    double mu2_or_c = 0.0;
    double sigma1_sq = 1.0;
    double sigma2_sq = 1.0;
    // r = n1/n2 for EpsilonR, q = (n1-1)/(n2-1) for DeltaPrimeQ; unused otherwise.
    double ratio = 1.0;
};

enum class VarianceDiagnostic { Ok, InsufficientDf };

struct EffectSizeResult {
    EffectKind kind = EffectKind::HedgesD;
    double estimate = 0.0;
    std::optional<double> estimate_variance;
    VarianceDiagnostic variance_diagnostic = VarianceDiagnostic::Ok;
    double df = 1.0;
    std::optional<std::pair<double, double>> ci;
    double alpha = 0.05;
    bool biased = false;
};

namespace detail {

inline void require_two_sample(const SampleSummary& s, const char* which) {
    if (s.n < 2 || !s.variance) {
        throw DomainError(std::string(which) + " group needs n >= 2 with a defined variance");
    }
    if (!(*s.variance >= 0.0) || !std::isfinite(s.mean)) {
        throw DomainError(std::string(which) + " group has an invalid summary");
    }
}

}  // namespace detail

// Effective sample size n~ = n1 n2 / (n1 + n2).
inline double effective_n(const SampleSummary& a, const SampleSummary& b) {
    return static_cast<double>(a.n) * static_cast<double>(b.n) /
           static_cast<double>(a.n + b.n);
}

// Glass' Delta: mean difference over the control group's SD. The paper
// attaches no variance or CI to it.
inline EffectSizeResult glass_delta(const SampleSummary& experimental,
                                    const SampleSummary& control) {
    detail::require_two_sample(control, "control");
    if (experimental.n < 1 || !std::isfinite(experimental.mean)) {
        throw DomainError("experimental group has an invalid summary");
    }
    if (*control.variance == 0.0) {
        throw DegenerateInputError("Glass' Delta is undefined for zero control variance");
    }
    const double estimate = (experimental.mean - control.mean) / std::sqrt(*control.variance);
    return EffectSizeResult{EffectKind::GlassDelta,
                            estimate,
                            std::nullopt,
                            VarianceDiagnostic::Ok,
                            static_cast<double>(control.n - 1),
                            std::nullopt,
                            0.05,
                            true};
}

namespace detail {

inline double pooled_variance(const SampleSummary& a, const SampleSummary& b) {
    return (*a.variance * static_cast<double>(a.n - 1) +
            *b.variance * static_cast<double>(b.n - 1)) /
           static_cast<double>(a.n + b.n - 2);
}

// Variance of a noncentral-t-based estimator with the unknown parameter
// replaced by the biased point estimate. `scale_sq` is n~ for the
// two-sample kinds and n1-1 for the one-sample kind. The biased variant
// carries 1/J^2 on the parameter term instead of J^2 on the bracket.
inline std::optional<double> plug_in_variance(double df, double scale_sq,
                                              double biased_estimate, bool unbiased) {
    if (!(df > 2.0)) return std::nullopt;
    const double j = correction_j(DegreesOfFreedom(df));
    const double ratio = df / (df - 2.0);
    const double est_sq = biased_estimate * biased_estimate;
    if (unbiased) {
        return ratio * j * j * (1.0 / scale_sq + est_sq) - est_sq;
    }
    return ratio * (1.0 / scale_sq + est_sq) - est_sq / (j * j);
}

}  // namespace detail

// Hedges' g: mean difference over the pooled SD, weights (n1-1) and (n2-1).
// Biased estimator of delta under equal variances.
inline EffectSizeResult hedges_g(const SampleSummary& a, const SampleSummary& b) {
    detail::require_two_sample(a, "first");
    detail::require_two_sample(b, "second");
    const double pooled = detail::pooled_variance(a, b);
    if (pooled == 0.0) {
        throw DegenerateInputError("pooled variance is zero");
    }
    const double m = static_cast<double>(a.n + b.n - 2);
    const double g = (a.mean - b.mean) / std::sqrt(pooled);
    auto variance = detail::plug_in_variance(m, effective_n(a, b), g, /*unbiased=*/false);
    return EffectSizeResult{EffectKind::HedgesG,
                            g,
                            variance,
                            variance ? VarianceDiagnostic::Ok : VarianceDiagnostic::InsufficientDf,
                            m,
                            std::nullopt,
                            0.05,
                            true};
}

// Hedges' d = J(n1+n2-2) g, the bias-corrected pooled effect size.
inline EffectSizeResult hedges_d(const SampleSummary& a, const SampleSummary& b) {
    EffectSizeResult result = hedges_g(a, b);
    const double g = result.estimate;
    const double m = result.df;
    result.kind = EffectKind::HedgesD;
    result.biased = false;
    result.estimate = g * correction_j(DegreesOfFreedom(m));
    result.estimate_variance =
        detail::plug_in_variance(m, effective_n(a, b), g, /*unbiased=*/true);
    result.variance_diagnostic =
        result.estimate_variance ? VarianceDiagnostic::Ok : VarianceDiagnostic::InsufficientDf;
    return result;
}

// Welch's t statistic.
inline double welch_t(const SampleSummary& a, const SampleSummary& b) {
    detail::require_two_sample(a, "first");
    detail::require_two_sample(b, "second");
    const double se_sq = *a.variance / static_cast<double>(a.n) +
                         *b.variance / static_cast<double>(b.n);
    if (se_sq == 0.0) {
        throw DegenerateInputError("both variances are zero");
    }
    return (a.mean - b.mean) / std::sqrt(se_sq);
}

// Welch-Satterthwaite approximate degrees of freedom; real-valued.
inline DegreesOfFreedom welch_satterthwaite_df(const SampleSummary& a,
                                               const SampleSummary& b) {
    detail::require_two_sample(a, "first");
    detail::require_two_sample(b, "second");
    const double u1 = *a.variance / static_cast<double>(a.n);
    const double u2 = *b.variance / static_cast<double>(b.n);
    if (u1 + u2 == 0.0) {
        throw DegenerateInputError("both variances are zero");
    }
    const double denom = u1 * u1 / static_cast<double>(a.n - 1) +
                         u2 * u2 / static_cast<double>(b.n - 1);
    return DegreesOfFreedom((u1 + u2) * (u1 + u2) / denom);
}

// Effect size of the difference between means without assuming equal
// variances: e_biased = t_w / sqrt(n~), e = e_biased J(f). Estimates
// epsilon_r with r = n1/n2.
inline EffectSizeResult effect_e(const SampleSummary& a, const SampleSummary& b,
                                 bool unbiased = true) {
    const double t_w = welch_t(a, b);
    const double f = welch_satterthwaite_df(a, b).value();
    const double n_eff = effective_n(a, b);
    const double e_biased = t_w / std::sqrt(n_eff);
    double estimate = e_biased;
    if (unbiased) {
        if (!(f > 1.0)) {
            throw DomainError("unbiased e needs Welch-Satterthwaite df > 1");
        }
        estimate = e_biased * correction_j(DegreesOfFreedom(f));
    }
    auto variance = detail::plug_in_variance(f, n_eff, e_biased, unbiased);
    return EffectSizeResult{unbiased ? EffectKind::E : EffectKind::EBiased,
                            estimate,
                            variance,
                            variance ? VarianceDiagnostic::Ok : VarianceDiagnostic::InsufficientDf,
                            f,
                            std::nullopt,
                            0.05,
                            !unbiased};
}

// Effect size of the difference between a mean and a known constant:
// c_biased = (mean - C)/s1, c = c_biased J(n1-1). The reversed flag yields
// c' = (C - mean) J(n1-1)/s1.
inline EffectSizeResult effect_c(const SampleSummary& a, double constant,
                                 bool unbiased = true, bool reversed = false) {
    detail::require_two_sample(a, "the");
    if (!std::isfinite(constant)) throw DomainError("the comparison constant must be finite");
    if (*a.variance == 0.0) {
        throw DegenerateInputError("c is undefined for zero sample variance");
    }
    const double df = static_cast<double>(a.n - 1);
    double c_biased = (a.mean - constant) / std::sqrt(*a.variance);
    if (reversed) c_biased = -c_biased;
    double estimate = c_biased;
    if (unbiased) {
        if (a.n < 3) throw DomainError("unbiased c needs n >= 3");
        estimate = c_biased * correction_j(DegreesOfFreedom(df));
    }
    auto variance = detail::plug_in_variance(df, df, c_biased, unbiased);
    EffectKind kind = EffectKind::CBiased;
    if (reversed) {
        kind = EffectKind::CPrime;
    } else if (unbiased) {
        kind = EffectKind::C;
    }
    return EffectSizeResult{kind,
                            estimate,
                            variance,
                            variance ? VarianceDiagnostic::Ok : VarianceDiagnostic::InsufficientDf,
                            df,
                            std::nullopt,
                            0.05,
                            !unbiased};
}

// Exact population parameter for a given configuration; the Monte Carlo
// ground truth.
inline double effect_from_parameters(const EffectParameters& params) {
    if (!(params.sigma1_sq > 0.0) || !std::isfinite(params.sigma1_sq)) {
        throw DomainError("sigma1_sq must be positive and finite");
    }
    switch (params.kind) {
        case ParameterKind::Delta:
            if (params.sigma2_sq != params.sigma1_sq) {
                throw DomainError("delta is defined only under equal variances");
            }
            return (params.mu1 - params.mu2_or_c) / std::sqrt(params.sigma1_sq);
        case ParameterKind::EpsilonR: {
            if (!(params.sigma2_sq > 0.0)) throw DomainError("sigma2_sq must be positive");
            if (!(params.ratio > 0.0) || !std::isfinite(params.ratio)) {
                throw DomainError("epsilon_r needs ratio r > 0");
            }
            const double denom_sq =
                (params.sigma1_sq + params.ratio * params.sigma2_sq) / (params.ratio + 1.0);
            return (params.mu1 - params.mu2_or_c) / std::sqrt(denom_sq);
        }
        case ParameterKind::Gamma:
            return (params.mu1 - params.mu2_or_c) / std::sqrt(params.sigma1_sq);
        case ParameterKind::DeltaPrimeQ: {
            if (!(params.sigma2_sq > 0.0)) throw DomainError("sigma2_sq must be positive");
            if (!(params.ratio > 0.0) || !std::isfinite(params.ratio)) {
                throw DomainError("delta_prime_q needs ratio q > 0");
            }
            const double denom_sq =
                (params.ratio * params.sigma1_sq + params.sigma2_sq) / (1.0 + params.ratio);
            return (params.mu1 - params.mu2_or_c) / std::sqrt(denom_sq);
        }
    }
    throw DomainError("unknown parameter kind");
}

}  // namespace effsize
