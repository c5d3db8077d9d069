#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "effsize/io.hpp"

using namespace effsize;
using Catch::Matchers::WithinAbs;

TEST_CASE("parse_number_list accepts well-formed lists and reports positions",
          "[io]") {
    const auto values = parse_number_list("0,1,2.5,-3e2,4");
    REQUIRE(values.size() == 5);
    CHECK(values[2] == 2.5);
    CHECK(values[3] == -300.0);
    CHECK_THROWS_AS(parse_number_list("1,two,3"), ParseError);
    CHECK_THROWS_MATCHES(parse_number_list("1,two,3"), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("element 2")));
    CHECK_THROWS_AS(parse_number_list("1,,3"), ParseError);
    CHECK_THROWS_AS(parse_number_list(""), ParseError);
}

TEST_CASE("read_csv detects headers and validates shape", "[io]") {
    std::istringstream with_header("x,y\n1,2\n3,4\n");
    const auto table = read_csv(with_header);
    REQUIRE(table.header.size() == 2);
    REQUIRE(table.rows.size() == 2);
    CHECK(numeric_column(table, "y") == std::vector<double>{2.0, 4.0});
    CHECK(numeric_column(table, "1") == std::vector<double>{2.0, 4.0});

    std::istringstream headerless("1,2\n3,4\n");
    const auto plain = read_csv(headerless);
    CHECK(plain.header.empty());
    CHECK(numeric_column(plain, "0") == std::vector<double>{1.0, 3.0});

    std::istringstream ragged("x,y\n1,2\n3\n");
    CHECK_THROWS_AS(read_csv(ragged), ParseError);
}

TEST_CASE("numeric_column rejects missing and malformed cells with a position",
          "[io]") {
    std::istringstream missing("x,y\n1,\n3,4\n");
    const auto table = read_csv(missing);
    CHECK_THROWS_MATCHES(numeric_column(table, "y"), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("row 1")));
    std::istringstream bad("x\n1\noops\n");
    const auto table2 = read_csv(bad);
    CHECK_THROWS_MATCHES(numeric_column(table2, "x"), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("row 2")));
    CHECK_THROWS_AS(numeric_column(table, "nope"), ParseError);
}

TEST_CASE("split_by_group separates long-format data", "[io]") {
    std::istringstream in(
        "value,group\n1,a\n2,b\n3,a\n4,b\n5,a\n");
    const auto table = read_csv(in);
    const auto [a, b] = split_by_group(table, "value", "group");
    CHECK(a == std::vector<double>{1.0, 3.0, 5.0});
    CHECK(b == std::vector<double>{2.0, 4.0});

    std::istringstream three(
        "value,group\n1,a\n2,b\n3,c\n");
    const auto t3 = read_csv(three);
    CHECK_THROWS_AS(split_by_group(t3, "value", "group"), ParseError);
    const auto [xa, xb] = split_by_group(t3, "value", "group", "a", "c");
    CHECK(xa == std::vector<double>{1.0});
    CHECK(xb == std::vector<double>{3.0});
}

TEST_CASE("CSV write and re-ingest is bit-identical", "[io]") {
    std::mt19937_64 rng(321);
    std::normal_distribution<double> dist(0.0, 3.7);
    std::vector<double> values(64);
    for (double& v : values) v = dist(rng);

    std::stringstream file;
    write_csv_column(file, "sample", values);
    const auto table = read_csv(file);
    const auto round_tripped = numeric_column(table, "sample");
    REQUIRE(round_tripped.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(round_tripped[i] == values[i]);
    }

    // and the derived effect size is therefore bit-identical as well
    const auto direct = summarize(values);
    const auto via_csv = summarize(round_tripped);
    CHECK(direct.mean == via_csv.mean);
    CHECK(direct.variance.value() == via_csv.variance.value());
}

TEST_CASE("vector format has exactly four fixed-precision fields", "[io]") {
    auto result = effect_c(summarize(std::vector<double>{0, 0, 1, 2, 2}), 2.0, false);
    CiRequest req;
    req.alpha = 0.01;
    attach_ci(result, summarize(std::vector<double>{0, 0, 1, 2, 2}), 2.0, req);
    const std::string line = format_vector(result);

    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) tokens.push_back(token);
    REQUIRE(tokens.size() == 4);
    CHECK_THAT(std::stod(tokens[0]), WithinAbs(-1.0, 1e-7));
    CHECK_THAT(std::stod(tokens[1]), WithinAbs(0.9292037, 1e-6));
    CHECK_THAT(std::stod(tokens[2]), WithinAbs(-2.5390625, 1e-3));
    CHECK_THAT(std::stod(tokens[3]), WithinAbs(0.5778885, 1e-3));
}

TEST_CASE("json output round-trips the computed doubles exactly", "[io]") {
    const auto s1 = summarize(std::vector<double>{0, 1, 2, 3, 4});
    const auto s2 = summarize(std::vector<double>{0, 0, 1, 2, 2});
    auto d = hedges_d(s1, s2);
    attach_ci(d, s1, s2);
    const auto parsed = nlohmann::json::parse(to_json(d).dump());
    CHECK(parsed["estimate"].get<double>() == d.estimate);
    CHECK(parsed["variance"].get<double>() == *d.estimate_variance);
    CHECK(parsed["ci_lower"].get<double>() == d.ci->first);
    CHECK(parsed["ci_upper"].get<double>() == d.ci->second);
    CHECK(parsed["df"].get<double>() == d.df);

    // absent variance serializes as null plus a diagnostic
    const auto tiny = hedges_d(SampleSummary{1.0, 1.0, 2}, SampleSummary{0.0, 1.0, 2});
    const auto j = to_json(tiny);
    CHECK(j["variance"].is_null());
    CHECK(j["variance_diagnostic"] == "insufficient_df");
}

TEST_CASE("ratio_curve covers the grid in order", "[io]") {
    CurveGridSpec grid;
    grid.s2_sq_start = 0.0;
    grid.s2_sq_stop = 0.05;
    grid.s2_sq_step = 0.01;
    grid.n1_values = {6, 10};
    const auto points = ratio_curve(grid);
    REQUIRE(points.size() == 12);  // 6 s2 values x 2 n1 values
    CHECK(points[0].n1 == 6);
    CHECK(points[0].s2_sq == 0.0);
    CHECK(points[5].s2_sq == 0.05);
    CHECK(points[6].n1 == 10);

    std::ostringstream out;
    write_ratio_curve(grid, out);
    std::istringstream lines(out.str());
    std::string first;
    std::getline(lines, first);
    CHECK(first == "s2_sq,n1,d,e,d_over_e");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 12);
}

TEST_CASE("ratio_curve equal-variance equal-n point gives d/e = 1", "[io]") {
    CurveGridSpec grid;
    grid.s2_sq_start = 10.0;
    grid.s2_sq_stop = 10.0;
    grid.s2_sq_step = 0.01;
    grid.n1_values = {10};
    const auto points = ratio_curve(grid);
    REQUIRE(points.size() == 1);
    CHECK_THAT(points[0].d_over_e, WithinAbs(1.0, 1e-12));
}

TEST_CASE("ratio_curve validates its grid", "[io]") {
    CurveGridSpec bad;
    bad.s2_sq_step = 0.0;
    CHECK_THROWS_AS(ratio_curve(bad), DomainError);
    CurveGridSpec tiny_n;
    tiny_n.n1_values = {1};
    CHECK_THROWS_AS(ratio_curve(tiny_n), DomainError);
}

TEST_CASE("iris demo has 12 rows with the expected structure", "[io]") {
    const auto rows = iris_demo_table();
    REQUIRE(rows.size() == 12);

    // frozen spot values recomputed independently (numpy) from the
    // bundled measurements: sepal length, setosa vs virginica
    const auto& sl13 = rows[1];
    CHECK(sl13.characteristic == "S.L.");
    CHECK(sl13.species_a == iris::kSetosa);
    CHECK(sl13.species_b == iris::kVirginica);
    CHECK_THAT(sl13.d, WithinAbs(-3.0536185452, 1e-9));
    CHECK_THAT(sl13.e, WithinAbs(-3.0469609526, 1e-9));
    CHECK_THAT(sl13.d_over_e, WithinAbs(1.0021849944, 1e-9));
    CHECK_THAT(sl13.sd_ratio, WithinAbs(0.5543340138, 1e-9));

    for (const auto& row : rows) {
        // near-equal SDs imply d/e within 0.01 of 1
        if (row.sd_ratio > 0.9 && row.sd_ratio < 1.1) {
            CHECK_THAT(row.d_over_e, WithinAbs(1.0, 0.01));
        }
        // equal group sizes: the pooled correction never undershoots Welch's
        CHECK(row.d_over_e >= 1.0 - 1e-12);
    }

    // the d/e inflation grows with the SD imbalance (the relationship the
    // demo's companion figure plots)
    auto sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
        const auto imbalance = [](double r) { return std::max(r, 1.0 / r); };
        return imbalance(x.sd_ratio) < imbalance(y.sd_ratio);
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        CHECK(sorted[i].d_over_e >= sorted[i - 1].d_over_e - 1e-12);
    }

    const std::string text = format_iris_demo(rows);
    CHECK(text.find("S.L.") != std::string::npos);
    CHECK(text.find("setosa vs versicolor") != std::string::npos);
}

TEST_CASE("embedded iris table matches the CSV asset", "[io]") {
    std::ifstream in(std::string(EFFSIZE_DATA_DIR) + "/iris.csv");
    REQUIRE(in.good());
    const auto table = read_csv(in);
    REQUIRE(table.rows.size() == iris::kObservations.size());
    const auto sepal_length = numeric_column(table, "sepal_length");
    const auto petal_width = numeric_column(table, "petal_width");
    const std::size_t species_col = resolve_column(table, "species");
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(sepal_length[i] == iris::kObservations[i].sepal_length);
        CHECK(petal_width[i] == iris::kObservations[i].petal_width);
        CHECK(table.rows[i][species_col] ==
              iris::kSpeciesNames[iris::kObservations[i].species]);
    }
}
