#pragma once

#include <charconv>
#include <cstdint>
#include <fmt/format.h>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "effsize/effect_sizes.hpp"
#include "effsize/errors.hpp"
#include "effsize/iris_data.hpp"
#include "effsize/verify_mc.hpp"

namespace effsize {

// ---------------------------------------------------------------------
// Numeric parsing
// ---------------------------------------------------------------------

inline double parse_double(std::string_view text, const std::string& where) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("not a number at " + where + ": '" + std::string(text) + "'");
    }
    return value;
}

// Comma-separated list of numbers, e.g. "0,1,2,3,4".
inline std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    std::size_t start = 0;
    std::size_t field = 1;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view cell = text.substr(start, comma - start);
        out.push_back(parse_double(cell, "element " + std::to_string(field)));
        start = comma + 1;
        ++field;
    }
    return out;
}

// ---------------------------------------------------------------------
// CSV: comma-separated, optional header row, '.' decimal separator, UTF-8.
// No quoting dialect; missing cells are rejected, not imputed.
// ---------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;  // empty when the first row is data
    std::vector<std::vector<std::string>> rows;

    std::size_t column_count() const {
        if (!header.empty()) return header.size();
        return rows.empty() ? 0 : rows.front().size();
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) comma = line.size();
        std::string cell = line.substr(start, comma - start);
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t lead = 0;
        while (lead < cell.size() && cell[lead] == ' ') ++lead;
        cells.push_back(cell.substr(lead));
        start = comma + 1;
    }
    return cells;
}

inline bool looks_numeric(const std::string& cell) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    return ec == std::errc{} && ptr == cell.data() + cell.size();
}

}  // namespace detail

inline CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool first = true;
    std::size_t row_number = 0;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty() || line == "\r") continue;
        auto cells = detail::split_csv_line(line);
        if (first) {
            first = false;
            bool all_numeric = true;
            for (const auto& cell : cells) {
                if (!detail::looks_numeric(cell)) all_numeric = false;
            }
            if (!all_numeric) {
                table.header = std::move(cells);
                continue;
            }
        }
        if (table.column_count() != 0 && cells.size() != table.column_count()) {
            throw ParseError("row " + std::to_string(row_number) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(table.column_count()));
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

// Column reference: a header name, or a 0-based index when the text is an
// integer (the only option for headerless files).
inline std::size_t resolve_column(const CsvTable& table, const std::string& ref) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (table.header[i] == ref) return i;
    }
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), index);
    if (ec == std::errc{} && ptr == ref.data() + ref.size() && index < table.column_count()) {
        return index;
    }
    throw ParseError("unknown column '" + ref + "'");
}

inline std::vector<double> numeric_column(const CsvTable& table, const std::string& ref) {
    const std::size_t col = resolve_column(table, ref);
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& cell = table.rows[r][col];
        if (cell.empty()) {
            throw ParseError("missing cell at row " + std::to_string(r + 1) + ", column '" +
                             ref + "'");
        }
        out.push_back(parse_double(cell, "row " + std::to_string(r + 1) + ", column '" +
                                             ref + "'"));
    }
    return out;
}

// Long-format split: one value column plus a group-label column. With no
// explicit labels the first two distinct labels, in order of appearance,
// become groups a and b.
inline std::pair<std::vector<double>, std::vector<double>> split_by_group(
    const CsvTable& table, const std::string& value_ref, const std::string& group_ref,
    std::optional<std::string> label_a = std::nullopt,
    std::optional<std::string> label_b = std::nullopt) {
    const std::size_t value_col = resolve_column(table, value_ref);
    const std::size_t group_col = resolve_column(table, group_ref);
    std::string a_label = label_a.value_or("");
    std::string b_label = label_b.value_or("");
    std::pair<std::vector<double>, std::vector<double>> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& label = table.rows[r][group_col];
        const std::string where =
            "row " + std::to_string(r + 1) + ", column '" + value_ref + "'";
        if (table.rows[r][value_col].empty()) throw ParseError("missing cell at " + where);
        const double value = parse_double(table.rows[r][value_col], where);
        if (a_label.empty() && label != b_label) a_label = label;
        if (label == a_label) {
            out.first.push_back(value);
            continue;
        }
        if (b_label.empty()) b_label = label;
        if (label == b_label) {
            out.second.push_back(value);
        } else if (label_a || label_b) {
            continue;  // explicit labels: ignore other groups
        } else {
            throw ParseError("more than two group labels in column '" + group_ref +
                             "' (row " + std::to_string(r + 1) +
                             "); pass explicit labels");
        }
    }
    return out;
}

inline void write_csv_column(std::ostream& out, const std::string& name,
                             std::span<const double> values) {
    out << name << "\n";
    for (double v : values) out << fmt::format("{}", v) << "\n";
}

// ---------------------------------------------------------------------
// Result formatting. Table/json carry 15 significant digits; the vector
// layout is the fixed 7-decimal four-field line
//   estimate variance ci_low ci_high
// ---------------------------------------------------------------------

inline std::string effect_label(EffectKind kind) {
    switch (kind) {
        case EffectKind::GlassDelta: return "Glass' Delta";
        case EffectKind::HedgesG: return "Hedges' g";
        case EffectKind::HedgesD: return "Hedges' d";
        case EffectKind::EBiased: return "e (biased)";
        case EffectKind::E: return "e";
        case EffectKind::CBiased: return "c (biased)";
        case EffectKind::C: return "c";
        case EffectKind::CPrime: return "c'";
    }
    return "?";
}

inline std::string effect_kind_token(EffectKind kind) {
    switch (kind) {
        case EffectKind::GlassDelta: return "glass-delta";
        case EffectKind::HedgesG: return "g";
        case EffectKind::HedgesD: return "d";
        case EffectKind::EBiased: return "e-biased";
        case EffectKind::E: return "e";
        case EffectKind::CBiased: return "c-biased";
        case EffectKind::C: return "c";
        case EffectKind::CPrime: return "c-prime";
    }
    return "?";
}

inline std::string format_table(const EffectSizeResult& result) {
    std::string out;
    out += fmt::format("{:<10} {}\n", "kind:", effect_label(result.kind));
    out += fmt::format("{:<10} {:.15g}\n", "estimate:", result.estimate);
    if (result.estimate_variance) {
        out += fmt::format("{:<10} {:.15g}\n", "variance:", *result.estimate_variance);
    } else if (result.variance_diagnostic == VarianceDiagnostic::InsufficientDf) {
        out += fmt::format("{:<10} undefined (insufficient degrees of freedom)\n",
                           "variance:");
    }
    if (result.ci) {
        out += fmt::format("{:<10} [{:.15g}, {:.15g}]  ({:g}% two-sided)\n", "ci:",
                           result.ci->first, result.ci->second,
                           100.0 * (1.0 - result.alpha));
    }
    out += fmt::format("{:<10} {:.15g}\n", "df:", result.df);
    return out;
}

inline std::string format_vector(const EffectSizeResult& result) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double variance = result.estimate_variance.value_or(nan);
    const double lo = result.ci ? result.ci->first : nan;
    const double hi = result.ci ? result.ci->second : nan;
    return fmt::format("{:.7f} {:.7f} {:.7f} {:.7f}", result.estimate, variance, lo, hi);
}

inline nlohmann::json to_json(const EffectSizeResult& result) {
    nlohmann::json j{
        {"kind", effect_kind_token(result.kind)},
        {"estimate", result.estimate},
        {"df", result.df},
        {"biased", result.biased},
    };
    if (result.estimate_variance) {
        j["variance"] = *result.estimate_variance;
    } else {
        j["variance"] = nullptr;
        if (result.variance_diagnostic == VarianceDiagnostic::InsufficientDf) {
            j["variance_diagnostic"] = "insufficient_df";
        }
    }
    if (result.ci) {
        j["ci_lower"] = result.ci->first;
        j["ci_upper"] = result.ci->second;
        j["alpha"] = result.alpha;
    }
    return j;
}

inline nlohmann::json to_json(const McReport& report) {
    nlohmann::json j{
        {"kind", effect_kind_token(report.kind)},
        {"n1", report.n1},
        {"replications", report.replications},
        {"target_parameter", report.target_parameter},
        {"mean_estimate", report.mean_estimate},
        {"estimate_sd", report.estimate_sd},
    };
    if (report.n2 > 0) j["n2"] = report.n2;
    if (report.formula_variance_mean) j["formula_variance_mean"] = *report.formula_variance_mean;
    if (report.empirical_variance) j["empirical_variance"] = *report.empirical_variance;
    if (report.mean_squared_error) j["mean_squared_error"] = *report.mean_squared_error;
    if (report.ci_coverage) j["ci_coverage"] = *report.ci_coverage;
    nlohmann::json se;
    if (report.standard_errors.mean_estimate) {
        se["mean_estimate"] = *report.standard_errors.mean_estimate;
    }
    if (report.standard_errors.empirical_variance) {
        se["empirical_variance"] = *report.standard_errors.empirical_variance;
    }
    if (report.standard_errors.ci_coverage) {
        se["ci_coverage"] = *report.standard_errors.ci_coverage;
    }
    if (!se.empty()) j["standard_errors"] = se;
    return j;
}

// ---------------------------------------------------------------------
// d/e ratio curve over a variance and sample-size grid
// ---------------------------------------------------------------------

struct CurveGridSpec {
    double mean1 = 1.0;
    double mean2 = 0.0;
    std::int64_t n2 = 10;
    double s1_sq = 10.0;
    double s2_sq_start = 0.0;
    double s2_sq_stop = 49.99;  // inclusive
    double s2_sq_step = 0.01;
    std::vector<std::int64_t> n1_values = {14, 12, 10, 8, 6};
};

struct CurvePoint {
    double s2_sq;
    std::int64_t n1;
    double d;
    double e;
    double d_over_e;
};

inline std::vector<CurvePoint> ratio_curve(const CurveGridSpec& grid) {
    if (!(grid.s2_sq_step > 0.0)) throw DomainError("s2_sq step must be positive");
    if (!(grid.s2_sq_stop >= grid.s2_sq_start)) throw DomainError("empty s2_sq range");
    if (!(grid.s1_sq > 0.0)) throw DomainError("s1_sq must be positive");
    if (grid.n2 < 2) throw DomainError("n2 must be >= 2");
    for (auto n1 : grid.n1_values) {
        if (n1 < 2) throw DomainError("all n1 values must be >= 2");
    }
    const auto steps = static_cast<std::int64_t>(
        std::llround((grid.s2_sq_stop - grid.s2_sq_start) / grid.s2_sq_step));
    std::vector<CurvePoint> points;
    points.reserve(static_cast<std::size_t>((steps + 1) * grid.n1_values.size()));
    for (auto n1 : grid.n1_values) {
        for (std::int64_t k = 0; k <= steps; ++k) {
            const double s2_sq = grid.s2_sq_start + static_cast<double>(k) * grid.s2_sq_step;
            const SampleSummary a{grid.mean1, grid.s1_sq, n1};
            const SampleSummary b{grid.mean2, s2_sq, grid.n2};
            const double d = hedges_d(a, b).estimate;
            const double e = effect_e(a, b).estimate;
            points.push_back(CurvePoint{s2_sq, n1, d, e, d / e});
        }
    }
    return points;
}

inline void write_ratio_curve(const CurveGridSpec& grid, std::ostream& out) {
    out << "s2_sq,n1,d,e,d_over_e\n";
    for (const auto& p : ratio_curve(grid)) {
        out << fmt::format("{},{},{},{},{}\n", p.s2_sq, p.n1, p.d, p.e, p.d_over_e);
    }
    if (!out) throw Error("failed to write ratio curve output");
}

// ---------------------------------------------------------------------
// Iris demo: d, e, d/e and the SD ratio for the four characteristics and
// the three unordered species pairs (reverse comparisons omitted).
// ---------------------------------------------------------------------

struct IrisDemoRow {
    std::string characteristic;
    int species_a;
    int species_b;
    double d;
    double e;
    double d_over_e;
    double sd_ratio;
};

inline std::vector<IrisDemoRow> iris_demo_table() {
    constexpr const char* characteristics[4] = {"S.L.", "S.W.", "P.L.", "P.W."};
    const auto pick = [](const iris::Observation& obs, int feature) {
        switch (feature) {
            case 0: return obs.sepal_length;
            case 1: return obs.sepal_width;
            case 2: return obs.petal_length;
            default: return obs.petal_width;
        }
    };
    std::vector<IrisDemoRow> rows;
    rows.reserve(12);
    for (int feature = 0; feature < 4; ++feature) {
        std::vector<double> values[3];
        for (const auto& obs : iris::kObservations) {
            values[obs.species].push_back(pick(obs, feature));
        }
        SampleSummary summaries[3] = {summarize(values[0]), summarize(values[1]),
                                      summarize(values[2])};
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                const double d = hedges_d(summaries[a], summaries[b]).estimate;
                const double e = effect_e(summaries[a], summaries[b]).estimate;
                rows.push_back(IrisDemoRow{
                    characteristics[feature], a, b, d, e, d / e,
                    std::sqrt(*summaries[a].variance / *summaries[b].variance)});
            }
        }
    }
    return rows;
}

inline std::string format_iris_demo(const std::vector<IrisDemoRow>& rows) {
    std::string out = fmt::format("{:<6} {:<22} {:>10} {:>10} {:>8} {:>9}\n", "Chara.",
                                  "Taxa", "d", "e", "d/e", "sd ratio");
    for (const auto& row : rows) {
        out += fmt::format("{:<6} {:<22} {:>10.4f} {:>10.4f} {:>8.4f} {:>9.4f}\n",
                           row.characteristic,
                           std::string(iris::kSpeciesNames[row.species_a]) + " vs " +
                               iris::kSpeciesNames[row.species_b],
                           row.d, row.e, row.d_over_e, row.sd_ratio);
    }
    return out;
}

}  // namespace effsize
