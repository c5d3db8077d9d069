// Command-line front end: effect-size computation from inline lists, CSV
// files, or summary statistics; the d/e ratio-curve emitter; the bundled
// Iris demonstration; and the Monte Carlo verification harness.
//
// Exit codes: 0 success, 1 verification FAIL, 2 usage error,
// 3 data/parse error, 4 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "effsize/effsize.hpp"

namespace {

using namespace effsize;

SampleSummary summary_from_spec(const std::string& text, const std::string& which) {
    const auto values = parse_number_list(text);
    if (values.size() != 3) {
        throw ParseError(which + " summary must be MEAN,VARIANCE,N");
    }
    if (!(values[2] >= 1.0) || values[2] != std::floor(values[2])) {
        throw ParseError(which + " summary: N must be a positive integer");
    }
    if (!(values[1] >= 0.0)) {
        throw ParseError(which + " summary: variance must be >= 0");
    }
    return SampleSummary{values[0], values[1], static_cast<std::int64_t>(values[2])};
}

EffectKind resolve_kind(const std::string& token, bool biased) {
    if (token == "glass-delta" || token == "glass") return EffectKind::GlassDelta;
    if (token == "g") return EffectKind::HedgesG;
    if (token == "d") return biased ? EffectKind::HedgesG : EffectKind::HedgesD;
    if (token == "e-biased") return EffectKind::EBiased;
    if (token == "e") return biased ? EffectKind::EBiased : EffectKind::E;
    if (token == "c-biased") return EffectKind::CBiased;
    if (token == "c") return biased ? EffectKind::CBiased : EffectKind::C;
    if (token == "c-prime") return EffectKind::CPrime;
    throw CLI::ValidationError("--kind", "unknown effect kind '" + token + "'");
}

bool is_one_sample(EffectKind kind) {
    return kind == EffectKind::CBiased || kind == EffectKind::C ||
           kind == EffectKind::CPrime;
}

struct EffectOptions {
    std::string kind_token = "d";
    bool biased = false;
    double alpha = 0.05;
    std::string format = "table";
    std::string inline_a, inline_b;
    std::string summary_a, summary_b;
    std::string csv_path, col_a, col_b, value_col, group_col, group_a, group_b;
    std::optional<double> constant;
};

CsvTable load_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CSV file '" + path + "'");
    return read_csv(in);
}

// Resolve the configured input source into group summaries (and report
// whether the second group exists).
std::pair<SampleSummary, std::optional<SampleSummary>> resolve_input(
    const EffectOptions& opt) {
    const int sources = (!opt.inline_a.empty() ? 1 : 0) + (!opt.summary_a.empty() ? 1 : 0) +
                        (!opt.csv_path.empty() ? 1 : 0);
    if (sources != 1) {
        throw CLI::ValidationError(
            "effect", "choose exactly one input source: --a, --summary-a, or --csv");
    }
    if (!opt.inline_a.empty()) {
        SampleSummary a = summarize(parse_number_list(opt.inline_a));
        if (opt.inline_b.empty()) return {a, std::nullopt};
        return {a, summarize(parse_number_list(opt.inline_b))};
    }
    if (!opt.summary_a.empty()) {
        SampleSummary a = summary_from_spec(opt.summary_a, "--summary-a");
        if (opt.summary_b.empty()) return {a, std::nullopt};
        return {a, summary_from_spec(opt.summary_b, "--summary-b")};
    }
    const CsvTable table = load_csv_file(opt.csv_path);
    if (!opt.value_col.empty() || !opt.group_col.empty()) {
        if (opt.value_col.empty() || opt.group_col.empty()) {
            throw CLI::ValidationError("effect",
                                       "--value-col and --group-col go together");
        }
        auto [va, vb] = split_by_group(
            table, opt.value_col, opt.group_col,
            opt.group_a.empty() ? std::nullopt : std::optional<std::string>(opt.group_a),
            opt.group_b.empty() ? std::nullopt : std::optional<std::string>(opt.group_b));
        return {summarize(va), summarize(vb)};
    }
    if (opt.col_a.empty()) {
        throw CLI::ValidationError("effect", "--csv needs --col-a or --value-col/--group-col");
    }
    SampleSummary a = summarize(numeric_column(table, opt.col_a));
    if (opt.col_b.empty()) return {a, std::nullopt};
    return {a, summarize(numeric_column(table, opt.col_b))};
}

int run_effect(const EffectOptions& opt) {
    const EffectKind kind = resolve_kind(opt.kind_token, opt.biased);
    auto [a, b] = resolve_input(opt);

    if (is_one_sample(kind)) {
        if (!opt.constant) {
            throw CLI::ValidationError("effect", "kind '" + opt.kind_token +
                                                     "' needs --constant");
        }
        if (b) {
            throw CLI::ValidationError("effect", "kind '" + opt.kind_token +
                                                     "' takes one group, not two");
        }
    } else if (!b) {
        throw CLI::ValidationError("effect", "kind '" + opt.kind_token +
                                                 "' needs a second group");
    }

    EffectSizeResult result;
    CiRequest req;
    req.alpha = opt.alpha;
    switch (kind) {
        case EffectKind::GlassDelta:
            result = glass_delta(a, *b);
            break;
        case EffectKind::HedgesG:
            result = hedges_g(a, *b);
            attach_ci(result, a, *b, req);
            break;
        case EffectKind::HedgesD:
            result = hedges_d(a, *b);
            attach_ci(result, a, *b, req);
            break;
        case EffectKind::EBiased:
        case EffectKind::E:
            result = effect_e(a, *b, kind == EffectKind::E);
            attach_ci(result, a, *b, req);
            break;
        case EffectKind::CBiased:
        case EffectKind::C:
        case EffectKind::CPrime:
            result = effect_c(a, *opt.constant, !opt.biased && kind != EffectKind::CBiased,
                              kind == EffectKind::CPrime);
            attach_ci(result, a, *opt.constant, req);
            break;
    }

    if (opt.format == "vector") {
        std::cout << format_vector(result) << "\n";
    } else if (opt.format == "json") {
        std::cout << to_json(result).dump() << "\n";
    } else {
        std::cout << format_table(result);
    }
    return 0;
}

struct VerifyOptions {
    std::string check = "bias";
    std::string kind_token = "e";
    PopulationSpec spec;
    double alpha = 0.05;
    std::string schedule = "5,20,80,320";
    double threshold = 0.02;
    bool json = false;
};

EffectKind resolve_verify_kind(const std::string& token) {
    return resolve_kind(token, false);
}

void print_report(const McReport& report, bool as_json) {
    if (as_json) return;  // handled by the caller for json mode
    std::cout << fmt::format("  n1={} n2={} reps={} target={:.15g} mean={:.15g} sd={:.6g}",
                             report.n1, report.n2, report.replications,
                             report.target_parameter, report.mean_estimate,
                             report.estimate_sd);
    if (report.standard_errors.mean_estimate) {
        std::cout << fmt::format(" se(mean)={:.3g}", *report.standard_errors.mean_estimate);
    }
    if (report.empirical_variance) {
        std::cout << fmt::format(" emp_var={:.6g}", *report.empirical_variance);
    }
    if (report.formula_variance_mean) {
        std::cout << fmt::format(" formula_var={:.6g}", *report.formula_variance_mean);
    }
    if (report.mean_squared_error) {
        std::cout << fmt::format(" mse={:.6g}", *report.mean_squared_error);
    }
    if (report.ci_coverage) {
        std::cout << fmt::format(" coverage={:.4f}", *report.ci_coverage);
    }
    std::cout << "\n";
}

int run_verify(const VerifyOptions& opt) {
    const EffectKind kind = resolve_verify_kind(opt.kind_token);
    CheckVerdict verdict;
    nlohmann::json out;
    out["check"] = opt.check;

    if (opt.check == "bias") {
        const McReport report = run_bias_check(opt.spec, kind);
        verdict = judge_bias(report);
        out["report"] = to_json(report);
        print_report(report, opt.json);
    } else if (opt.check == "variance") {
        const McReport report = run_variance_check(opt.spec, kind);
        verdict = judge_variance(report);
        out["report"] = to_json(report);
        print_report(report, opt.json);
    } else if (opt.check == "coverage") {
        const McReport report = run_coverage_check(opt.spec, kind, opt.alpha);
        verdict = judge_coverage(report, opt.alpha);
        out["report"] = to_json(report);
        print_report(report, opt.json);
    } else if (opt.check == "consistency") {
        std::vector<std::int64_t> schedule;
        for (double v : parse_number_list(opt.schedule)) {
            if (v != std::floor(v) || v < 2.0) {
                throw ParseError("--schedule entries must be integers >= 2");
            }
            schedule.push_back(static_cast<std::int64_t>(v));
        }
        const auto reports = run_consistency_check(opt.spec, kind, schedule);
        verdict = judge_consistency(reports, opt.threshold);
        out["reports"] = nlohmann::json::array();
        for (const auto& report : reports) {
            out["reports"].push_back(to_json(report));
            print_report(report, opt.json);
        }
    } else {
        throw CLI::ValidationError("--check", "unknown check '" + opt.check + "'");
    }

    out["passed"] = verdict.passed;
    out["detail"] = verdict.detail;
    if (opt.json) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (verdict.passed ? "PASS" : "FAIL") << ": " << verdict.detail << "\n";
    }
    return verdict.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effect sizes of the difference between means (with and without the "
                 "equal-variance assumption) and between a mean and a constant, with "
                 "variances and noncentral-t confidence intervals."};
    app.require_subcommand(1);

    EffectOptions effect_opt;
    auto* effect = app.add_subcommand("effect", "compute one effect size");
    effect->add_option("--kind", effect_opt.kind_token,
                       "glass-delta|g|d|e|e-biased|c|c-biased|c-prime")
        ->default_val("d");
    effect->add_flag("--biased", effect_opt.biased, "use the uncorrected estimator");
    effect->add_option("--alpha", effect_opt.alpha, "two-sided type I error rate for the CI")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12))
        ->default_val(0.05);
    effect->add_option("--format", effect_opt.format, "table|json|vector")
        ->check(CLI::IsMember({"table", "json", "vector"}))
        ->default_val("table");
    effect->add_option("--a", effect_opt.inline_a, "group A as an inline list, e.g. 0,1,2,3,4");
    effect->add_option("--b", effect_opt.inline_b, "group B as an inline list");
    effect->add_option("--summary-a", effect_opt.summary_a, "group A as MEAN,VARIANCE,N");
    effect->add_option("--summary-b", effect_opt.summary_b, "group B as MEAN,VARIANCE,N");
    effect->add_option("--csv", effect_opt.csv_path, "CSV input file");
    effect->add_option("--col-a", effect_opt.col_a, "CSV column (name or index) for group A");
    effect->add_option("--col-b", effect_opt.col_b, "CSV column (name or index) for group B");
    effect->add_option("--value-col", effect_opt.value_col,
                       "CSV value column for long format");
    effect->add_option("--group-col", effect_opt.group_col,
                       "CSV group-label column for long format");
    effect->add_option("--group-a", effect_opt.group_a, "label of group A in --group-col");
    effect->add_option("--group-b", effect_opt.group_b, "label of group B in --group-col");
    double constant_value = 0.0;
    auto* constant_flag =
        effect->add_option("--constant", constant_value, "comparison constant for c kinds");
    effect->callback([&] {
        if (*constant_flag) effect_opt.constant = constant_value;
    });

    CurveGridSpec grid;
    std::string curve_out = "-";
    std::string n1_list = "14,12,10,8,6";
    auto* curve = app.add_subcommand(
        "ratio-curve", "emit the d/e ratio over a variance and sample-size grid as CSV");
    curve->add_option("--mean1", grid.mean1)->default_val(1.0);
    curve->add_option("--mean2", grid.mean2)->default_val(0.0);
    curve->add_option("--n2", grid.n2)->default_val(10);
    curve->add_option("--s1-sq", grid.s1_sq)->default_val(10.0);
    curve->add_option("--s2-sq-start", grid.s2_sq_start)->default_val(0.0);
    curve->add_option("--s2-sq-stop", grid.s2_sq_stop)->default_val(49.99);
    curve->add_option("--s2-sq-step", grid.s2_sq_step)->default_val(0.01);
    curve->add_option("--n1", n1_list, "comma-separated n1 values")->default_val("14,12,10,8,6");
    curve->add_option("--out", curve_out, "output path, '-' for stdout")->default_val("-");

    auto* iris_cmd = app.add_subcommand(
        "iris-demo", "d, e, d/e and SD ratio for the bundled Iris measurements");

    VerifyOptions verify_opt;
    auto* verify = app.add_subcommand(
        "verify", "Monte Carlo verification of bias, variance, consistency, coverage");
    verify->add_option("--check", verify_opt.check, "bias|variance|consistency|coverage")
        ->check(CLI::IsMember({"bias", "variance", "consistency", "coverage"}))
        ->required();
    verify->add_option("--kind", verify_opt.kind_token, "d|g|e|e-biased|c|c-biased|c-prime")
        ->default_val("e");
    verify->add_option("--mu1", verify_opt.spec.mu1)->default_val(0.0);
    verify->add_option("--mu2,--constant", verify_opt.spec.mu2_or_c,
                       "second-group mean, or the constant for c kinds")
        ->default_val(0.0);
    verify->add_option("--sigma1-sq", verify_opt.spec.sigma1_sq)->default_val(1.0);
    verify->add_option("--sigma2-sq", verify_opt.spec.sigma2_sq)->default_val(1.0);
    verify->add_option("--n1", verify_opt.spec.n1)->default_val(10);
    verify->add_option("--n2", verify_opt.spec.n2)->default_val(10);
    verify->add_option("--reps", verify_opt.spec.replications)->default_val(10000);
    verify->add_option("--seed", verify_opt.spec.seed)->default_val(1);
    verify->add_option("--alpha", verify_opt.alpha, "CI level for the coverage check")
        ->default_val(0.05);
    verify->add_option("--schedule", verify_opt.schedule,
                       "n1 schedule for the consistency check")
        ->default_val("5,20,80,320");
    verify->add_option("--threshold", verify_opt.threshold,
                       "final-MSE threshold for the consistency check")
        ->default_val(0.02);
    verify->add_flag("--json", verify_opt.json, "emit the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*effect) return run_effect(effect_opt);
        if (*curve) {
            grid.n1_values.clear();
            for (double v : parse_number_list(n1_list)) {
                if (v != std::floor(v) || v < 2.0) {
                    throw ParseError("--n1 entries must be integers >= 2");
                }
                grid.n1_values.push_back(static_cast<std::int64_t>(v));
            }
            if (curve_out == "-") {
                write_ratio_curve(grid, std::cout);
            } else {
                std::ofstream out(curve_out);
                if (!out) throw ParseError("cannot open output file '" + curve_out + "'");
                write_ratio_curve(grid, out);
            }
            return 0;
        }
        if (*iris_cmd) {
            std::cout << format_iris_demo(iris_demo_table());
            return 0;
        }
        if (*verify) return run_verify(verify_opt);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const SearchFailureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
