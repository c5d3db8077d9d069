#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "effsize/confidence.hpp"
#include "effsize/effect_sizes.hpp"
#include "effsize/errors.hpp"

namespace effsize {

// Ground-truth description of the simulated populations. For one-sample
// kinds mu2_or_c is the comparison constant and (sigma2_sq, n2) are unused.
struct PopulationSpec {
    double mu1 = 0.0;
    double mu2_or_c = 0.0;
    double sigma1_sq = 1.0;
    double sigma2_sq = 1.0;
    std::int64_t n1 = 2;
    std::int64_t n2 = 2;
    std::int64_t replications = 10000;
    std::uint64_t seed = 0;
};

struct McStandardErrors {
    std::optional<double> mean_estimate;
    std::optional<double> empirical_variance;
    std::optional<double> ci_coverage;
};

struct McReport {
    EffectKind kind = EffectKind::E;
    std::int64_t n1 = 0;
    std::int64_t n2 = 0;
    std::int64_t replications = 0;
    double target_parameter = 0.0;
    double mean_estimate = 0.0;
    double estimate_sd = 0.0;
    std::optional<double> formula_variance_mean;
    std::optional<double> empirical_variance;
    std::optional<double> mean_squared_error;
    std::optional<double> ci_coverage;
    McStandardErrors standard_errors;
};

namespace detail {

// Order-independent reduction; replications may later run out of order.
inline double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 32) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline double pairwise_mean(std::span<const double> values) {
    return pairwise_sum(values) / static_cast<double>(values.size());
}

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Per-replication random stream: mt19937_64 (bit-exact per the C++
// standard) seeded by a splitmix64 mix of (seed, stream), normal variates
// by the trigonometric Box-Muller transform. Replication r of a run sees
// exactly the stream (seed, r), independent of execution order.
class ReplicationRng {
  public:
    ReplicationRng(std::uint64_t seed, std::uint64_t stream)
        : engine_(detail::splitmix64(seed ^ detail::splitmix64(stream))) {}

    // Uniform on (0, 1), never exactly 0 or 1.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double theta = 2.0 * std::numbers::pi * uniform01();
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

  private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

namespace detail {

inline bool is_one_sample_kind(EffectKind kind) {
    return kind == EffectKind::CBiased || kind == EffectKind::C ||
           kind == EffectKind::CPrime;
}

inline bool is_welch_kind(EffectKind kind) {
    return kind == EffectKind::E || kind == EffectKind::EBiased;
}

inline bool is_pooled_kind(EffectKind kind) {
    return kind == EffectKind::HedgesD || kind == EffectKind::HedgesG;
}

inline void validate_population(const PopulationSpec& spec, EffectKind kind) {
    if (!(spec.sigma1_sq > 0.0)) throw DomainError("sigma1_sq must be positive");
    if (spec.n1 < 2) throw DomainError("n1 must be >= 2");
    if (spec.replications < 1) throw DomainError("replications must be >= 1");
    if (!is_one_sample_kind(kind)) {
        if (!(spec.sigma2_sq > 0.0)) throw DomainError("sigma2_sq must be positive");
        if (spec.n2 < 2) throw DomainError("n2 must be >= 2");
    }
    if (kind == EffectKind::GlassDelta) {
        throw DomainError("the Monte Carlo harness does not target Glass' Delta");
    }
}

inline std::vector<double> sample_group(ReplicationRng& rng, std::int64_t n, double mu,
                                        double sigma_sq) {
    std::vector<double> out(static_cast<std::size_t>(n));
    const double sigma = std::sqrt(sigma_sq);
    for (double& v : out) v = rng.normal(mu, sigma);
    return out;
}

inline double evaluate_estimator(EffectKind kind, const SampleSummary& s1,
                                 const SampleSummary& s2, double constant) {
    switch (kind) {
        case EffectKind::HedgesG: return hedges_g(s1, s2).estimate;
        case EffectKind::HedgesD: return hedges_d(s1, s2).estimate;
        case EffectKind::EBiased: return effect_e(s1, s2, false).estimate;
        case EffectKind::E: return effect_e(s1, s2, true).estimate;
        case EffectKind::CBiased: return effect_c(s1, constant, false).estimate;
        case EffectKind::C: return effect_c(s1, constant, true).estimate;
        case EffectKind::CPrime: return effect_c(s1, constant, true, true).estimate;
        default: throw DomainError("unsupported estimator kind");
    }
}

}  // namespace detail

// Population parameter targeted by the given estimator under the spec:
// epsilon_r (r = n1/n2) for e, gamma for c (negated for c'), delta for
// Hedges' g/d (which requires sigma1_sq == sigma2_sq).
inline double target_parameter(const PopulationSpec& spec, EffectKind kind) {
    detail::validate_population(spec, kind);
    EffectParameters params;
    params.mu1 = spec.mu1;
    params.mu2_or_c = spec.mu2_or_c;
    params.sigma1_sq = spec.sigma1_sq;
    params.sigma2_sq = spec.sigma2_sq;
    if (detail::is_one_sample_kind(kind)) {
        params.kind = ParameterKind::Gamma;
        const double gamma = effect_from_parameters(params);
        return kind == EffectKind::CPrime ? -gamma : gamma;
    }
    if (detail::is_welch_kind(kind)) {
        params.kind = ParameterKind::EpsilonR;
        params.ratio = static_cast<double>(spec.n1) / static_cast<double>(spec.n2);
        return effect_from_parameters(params);
    }
    params.kind = ParameterKind::Delta;
    return effect_from_parameters(params);
}

namespace detail {

struct ReplicationDraws {
    SampleSummary s1;
    SampleSummary s2;
};

inline ReplicationDraws draw_replication(const PopulationSpec& spec, EffectKind kind,
                                         std::uint64_t stream) {
    ReplicationRng rng(spec.seed, stream);
    ReplicationDraws draws;
    const auto group1 = sample_group(rng, spec.n1, spec.mu1, spec.sigma1_sq);
    draws.s1 = summarize(group1);
    if (!is_one_sample_kind(kind)) {
        const auto group2 = sample_group(rng, spec.n2, spec.mu2_or_c, spec.sigma2_sq);
        draws.s2 = summarize(group2);
    }
    return draws;
}

inline double sample_variance(std::span<const double> values, double mean) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        sq[i] = (values[i] - mean) * (values[i] - mean);
    }
    return pairwise_sum(sq) / static_cast<double>(values.size() - 1);
}

}  // namespace detail

// Mean of the estimator across replications against the exact parameter.
inline McReport run_bias_check(const PopulationSpec& spec, EffectKind kind) {
    const double target = target_parameter(spec, kind);
    const auto reps = static_cast<std::size_t>(spec.replications);
    std::vector<double> estimates(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto draws = detail::draw_replication(spec, kind, r);
        estimates[r] = detail::evaluate_estimator(kind, draws.s1, draws.s2, spec.mu2_or_c);
    }
    McReport report;
    report.kind = kind;
    report.n1 = spec.n1;
    report.n2 = detail::is_one_sample_kind(kind) ? 0 : spec.n2;
    report.replications = spec.replications;
    report.target_parameter = target;
    report.mean_estimate = detail::pairwise_mean(estimates);
    report.estimate_sd =
        reps > 1 ? std::sqrt(detail::sample_variance(estimates, report.mean_estimate)) : 0.0;
    report.standard_errors.mean_estimate =
        report.estimate_sd / std::sqrt(static_cast<double>(reps));
    return report;
}

// Empirical variance of the estimator against the paper's variance formula
// evaluated at the true parameter (not the plug-in). The formula's df is
// data-dependent for e, so the report carries the mean formula value.
inline McReport run_variance_check(const PopulationSpec& spec, EffectKind kind) {
    const double target = target_parameter(spec, kind);
    const auto reps = static_cast<std::size_t>(spec.replications);
    std::vector<double> estimates(reps);
    std::vector<double> formula(reps);
    std::size_t df_failures = 0;
    const bool unbiased = kind == EffectKind::E || kind == EffectKind::C ||
                          kind == EffectKind::CPrime || kind == EffectKind::HedgesD;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto draws = detail::draw_replication(spec, kind, r);
        estimates[r] = detail::evaluate_estimator(kind, draws.s1, draws.s2, spec.mu2_or_c);
        double df = 0.0;
        double scale_sq = 0.0;
        if (detail::is_one_sample_kind(kind)) {
            df = static_cast<double>(spec.n1 - 1);
            scale_sq = df;
        } else if (detail::is_welch_kind(kind)) {
            df = welch_satterthwaite_df(draws.s1, draws.s2).value();
            scale_sq = effective_n(draws.s1, draws.s2);
        } else {
            df = static_cast<double>(spec.n1 + spec.n2 - 2);
            scale_sq = effective_n(draws.s1, draws.s2);
        }
        const auto value = detail::plug_in_variance(df, scale_sq, target, unbiased);
        if (value) {
            formula[r] = *value;
        } else {
            ++df_failures;
            formula[r] = 0.0;
        }
    }
    if (df_failures == reps) {
        throw DomainError("variance formula undefined in every replication (df too small)");
    }
    McReport report;
    report.kind = kind;
    report.n1 = spec.n1;
    report.n2 = detail::is_one_sample_kind(kind) ? 0 : spec.n2;
    report.replications = spec.replications;
    report.target_parameter = target;
    report.mean_estimate = detail::pairwise_mean(estimates);
    const double emp_var = detail::sample_variance(estimates, report.mean_estimate);
    report.estimate_sd = std::sqrt(emp_var);
    report.empirical_variance = emp_var;
    report.formula_variance_mean = detail::pairwise_mean(formula);
    report.standard_errors.mean_estimate =
        report.estimate_sd / std::sqrt(static_cast<double>(reps));
    // Normal-theory approximation to the MC standard error of a variance.
    report.standard_errors.empirical_variance =
        emp_var * std::sqrt(2.0 / static_cast<double>(reps - 1));
    return report;
}

// Mean-square error along a growing n1 schedule; the n1/n2 ratio of the
// base spec is held fixed. Lemmas 1-2 predict a strictly decreasing trend.
inline std::vector<McReport> run_consistency_check(const PopulationSpec& spec,
                                                   EffectKind kind,
                                                   std::span<const std::int64_t> n1_schedule) {
    detail::validate_population(spec, kind);
    if (n1_schedule.empty()) throw DomainError("empty n schedule");
    for (std::size_t i = 1; i < n1_schedule.size(); ++i) {
        if (n1_schedule[i] <= n1_schedule[i - 1]) {
            throw DomainError("n schedule must be strictly increasing");
        }
    }
    std::vector<McReport> reports;
    reports.reserve(n1_schedule.size());
    for (std::size_t i = 0; i < n1_schedule.size(); ++i) {
        PopulationSpec sized = spec;
        sized.n1 = n1_schedule[i];
        if (!detail::is_one_sample_kind(kind)) {
            // keep r = n1/n2 identical across the schedule
            if ((n1_schedule[i] * spec.n2) % spec.n1 != 0) {
                throw DomainError("schedule size breaks the fixed n1/n2 ratio");
            }
            sized.n2 = n1_schedule[i] * spec.n2 / spec.n1;
        }
        sized.seed = detail::splitmix64(spec.seed ^ (0xC0FFEEULL + i));
        McReport report = run_bias_check(sized, kind);
        const double bias = report.mean_estimate - report.target_parameter;
        report.mean_squared_error =
            report.estimate_sd * report.estimate_sd *
                (static_cast<double>(sized.replications - 1) /
                 static_cast<double>(sized.replications)) +
            bias * bias;
        reports.push_back(report);
    }
    return reports;
}

// Fraction of replications whose noncentral-t pivot interval covers the
// true parameter. The pivot interval (the un-rescaled one) is the exact
// CI for the parameter; kinds select the pivot family only.
inline McReport run_coverage_check(const PopulationSpec& spec, EffectKind kind,
                                   double alpha) {
    const double target = target_parameter(spec, kind);
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    const auto reps = static_cast<std::size_t>(spec.replications);
    CiRequest req;
    req.alpha = alpha;
    std::vector<double> covered(reps);
    std::vector<double> estimates(reps);
    // c' targets -gamma with a negated interval; coverage is identical to
    // the canonical c pivot, so judge the canonical parameter.
    const double canonical_target = kind == EffectKind::CPrime ? -target : target;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto draws = detail::draw_replication(spec, kind, r);
        estimates[r] = detail::evaluate_estimator(kind, draws.s1, draws.s2, spec.mu2_or_c);
        std::pair<double, double> interval{0.0, 0.0};
        if (detail::is_one_sample_kind(kind)) {
            const auto pivot = effect_c(draws.s1, spec.mu2_or_c, /*unbiased=*/false);
            interval = ci_for_effect(pivot, draws.s1, spec.mu2_or_c, req);
        } else if (detail::is_welch_kind(kind)) {
            const auto pivot = effect_e(draws.s1, draws.s2, /*unbiased=*/false);
            interval = ci_for_effect(pivot, draws.s1, draws.s2, req);
        } else {
            const auto pivot = hedges_g(draws.s1, draws.s2);
            interval = ci_for_effect(pivot, draws.s1, draws.s2, req);
        }
        covered[r] = (interval.first <= canonical_target &&
                      canonical_target <= interval.second)
                         ? 1.0
                         : 0.0;
    }
    McReport report;
    report.kind = kind;
    report.n1 = spec.n1;
    report.n2 = detail::is_one_sample_kind(kind) ? 0 : spec.n2;
    report.replications = spec.replications;
    report.target_parameter = target;
    report.mean_estimate = detail::pairwise_mean(estimates);
    report.estimate_sd =
        reps > 1 ? std::sqrt(detail::sample_variance(estimates, report.mean_estimate)) : 0.0;
    report.standard_errors.mean_estimate =
        report.estimate_sd / std::sqrt(static_cast<double>(reps));
    const double coverage = detail::pairwise_mean(covered);
    report.ci_coverage = coverage;
    report.standard_errors.ci_coverage =
        std::sqrt(coverage * (1.0 - coverage) / static_cast<double>(reps));
    return report;
}

// ---------------------------------------------------------------------
// Pass/fail judgments. Tolerances are expressed in Monte Carlo standard
// errors computed from the replications themselves; e additionally gets
// the 0.03 allowance for the chi-square(f) approximation error.
// ---------------------------------------------------------------------

struct CheckVerdict {
    bool passed = false;
    std::string detail;
};

inline CheckVerdict judge_bias(const McReport& report) {
    const double se = report.standard_errors.mean_estimate.value_or(0.0);
    double tolerance = 4.0 * se;
    if (detail::is_welch_kind(report.kind)) tolerance = std::max(tolerance, 0.03);
    const double bias = report.mean_estimate - report.target_parameter;
    CheckVerdict verdict;
    verdict.passed = std::fabs(bias) <= tolerance;
    verdict.detail = "bias " + std::to_string(bias) + " vs tolerance " +
                     std::to_string(tolerance);
    return verdict;
}

inline CheckVerdict judge_variance(const McReport& report) {
    if (!report.empirical_variance || !report.formula_variance_mean) {
        return {false, "variance fields missing"};
    }
    const double formula = *report.formula_variance_mean;
    const double se = report.standard_errors.empirical_variance.value_or(0.0);
    const double tolerance = std::max(0.05 * std::fabs(formula), 4.0 * se);
    const double gap = *report.empirical_variance - formula;
    CheckVerdict verdict;
    verdict.passed = std::fabs(gap) <= tolerance;
    verdict.detail = "empirical " + std::to_string(*report.empirical_variance) +
                     " vs formula " + std::to_string(formula);
    return verdict;
}

inline CheckVerdict judge_coverage(const McReport& report, double alpha) {
    if (!report.ci_coverage) return {false, "coverage field missing"};
    const double se = report.standard_errors.ci_coverage.value_or(0.0);
    const double tolerance = std::max(4.0 * se, 0.01);
    const double gap = *report.ci_coverage - (1.0 - alpha);
    CheckVerdict verdict;
    verdict.passed = std::fabs(gap) <= tolerance;
    verdict.detail = "coverage " + std::to_string(*report.ci_coverage) + " vs nominal " +
                     std::to_string(1.0 - alpha);
    return verdict;
}

inline CheckVerdict judge_consistency(std::span<const McReport> reports,
                                      double final_mse_threshold = 0.02) {
    if (reports.empty()) return {false, "no reports"};
    CheckVerdict verdict;
    verdict.passed = true;
    std::string mse_list;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!reports[i].mean_squared_error) return {false, "mse field missing"};
        if (i > 0 && !(*reports[i].mean_squared_error < *reports[i - 1].mean_squared_error)) {
            verdict.passed = false;
        }
        mse_list += (i ? ", " : "") + std::to_string(*reports[i].mean_squared_error);
    }
    if (!(*reports.back().mean_squared_error < final_mse_threshold)) {
        verdict.passed = false;
    }
    verdict.detail = "mse sequence [" + mse_list + "], final threshold " +
                     std::to_string(final_mse_threshold);
    return verdict;
}

}  // namespace effsize
