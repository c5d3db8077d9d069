#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "effsize/special_functions.hpp"

using namespace effsize;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("log_gamma reproduces closed-form values", "[special_functions]") {
    CHECK_THAT(log_gamma(1.0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(log_gamma(2.0), WithinAbs(0.0, 1e-15));
    // Gamma(1/2) = sqrt(pi)
    CHECK_THAT(log_gamma(0.5), WithinRel(0.5 * std::log(std::numbers::pi), 1e-14));
    // Gamma(6.5) = 5.5 * 4.5 * 3.5 * 2.5 * 1.5 * 0.5 * sqrt(pi), via the recurrence
    double expected = 0.5 * std::log(std::numbers::pi);
    for (int k = 1; k <= 6; ++k) expected += std::log(k - 0.5);
    CHECK_THAT(log_gamma(6.5), WithinRel(expected, 1e-13));
    CHECK_THAT(log_gamma(6.5), WithinRel(std::log(287.88527781504433), 1e-13));
}

TEST_CASE("log_gamma reaches 12 significant digits across [0.5, 1e6]",
          "[special_functions]") {
    // reference values computed with mpmath at 30 digits
    const struct {
        double x;
        double value;
    } anchors[] = {
        {0.5, 0.572364942924700087},    {1.3, -0.108174809507860478},
        {6.5, 5.66256205985714153},     {7.9, 8.32426586800880963},
        {100.1, 359.594271788856785},   {1e6, 12815504.5691476117},
    };
    for (const auto& a : anchors) {
        CHECK_THAT(log_gamma(a.x), WithinRel(a.value, 1e-12));
    }
}

TEST_CASE("log_gamma satisfies the recurrence ln G(x+1) = ln G(x) + ln x",
          "[special_functions]") {
    for (double x : {0.5, 1.3, 7.9, 100.1}) {
        const double lhs = log_gamma(x + 1.0);
        const double rhs = log_gamma(x) + std::log(x);
        CHECK_THAT(lhs, WithinRel(rhs, 1e-12));
    }
}

TEST_CASE("log_gamma rejects non-positive and non-finite input", "[special_functions]") {
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.0), DomainError);
    CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("correction_j matches gamma-identity values", "[special_functions]") {
    // J(2) = 1/sqrt(pi), J(4) = sqrt(2/pi)
    CHECK_THAT(correction_j(DegreesOfFreedom(2.0)),
               WithinRel(1.0 / std::sqrt(std::numbers::pi), 1e-14));
    CHECK_THAT(correction_j(DegreesOfFreedom(4.0)),
               WithinRel(std::sqrt(2.0 / std::numbers::pi), 1e-14));
    // J(13) scaled by the pooled estimate reproduces the golden values's d
    const double g = 1.0 / std::sqrt(17.0 / 13.0);
    CHECK_THAT(correction_j(DegreesOfFreedom(13.0)) * g,
               WithinAbs(0.82286529714397, 1e-12));
}

TEST_CASE("correction_j stays in (0,1), increases, and tends to 1",
          "[special_functions]") {
    const double grid[] = {1.0001, 1.1, 1.5, 2, 3, 4, 5, 8, 13, 20, 50,
                           100,    342, 343, 1000, 1e4, 1e5, 1e6};
    double previous = 0.0;
    for (double m : grid) {
        const double j = correction_j(DegreesOfFreedom(m));
        CHECK(j > 0.0);
        CHECK(j < 1.0);
        CHECK(j > previous);
        previous = j;
    }
    CHECK(correction_j(DegreesOfFreedom(1e6)) > 1.0 - 1e-6);
    // no overflow anywhere, in particular past the reference implementation's
    // df = 342 switch-over
    CHECK_THAT(correction_j(DegreesOfFreedom(342.0)), WithinRel(0.997805145554663564, 1e-12));
    CHECK_THAT(correction_j(DegreesOfFreedom(343.0)), WithinRel(0.997811549994080835, 1e-12));
}

TEST_CASE("correction_j agrees with Hedges' classical approximation for m >= 10",
          "[special_functions]") {
    for (double m = 10.0; m <= 5000.0; m *= 1.7) {
        const double approx = 1.0 - 3.0 / (4.0 * m - 1.0);
        CHECK_THAT(correction_j(DegreesOfFreedom(m)), WithinAbs(approx, 1e-3));
    }
}

TEST_CASE("correction_j requires df > 1", "[special_functions]") {
    CHECK_THROWS_AS(correction_j(DegreesOfFreedom(1.0)), DomainError);
    CHECK_THROWS_AS(correction_j(DegreesOfFreedom(0.5)), DomainError);
}

TEST_CASE("DegreesOfFreedom validates its value", "[special_functions]") {
    CHECK_THROWS_AS(DegreesOfFreedom(0.0), DomainError);
    CHECK_THROWS_AS(DegreesOfFreedom(-3.0), DomainError);
    CHECK_THROWS_AS(DegreesOfFreedom(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK(DegreesOfFreedom(6.758620689655171).value() == 6.758620689655171);
}
