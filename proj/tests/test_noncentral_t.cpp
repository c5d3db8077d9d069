#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "effsize/noncentral_t.hpp"
#include "oracles.hpp"

using namespace effsize;
using Catch::Matchers::WithinAbs;

namespace {
DegreesOfFreedom df(double v) { return DegreesOfFreedom(v); }
}  // namespace

TEST_CASE("central_t_cdf basics", "[noncentral_t]") {
    CHECK_THAT(central_t_cdf(0.0, df(7.0)), WithinAbs(0.5, 1e-15));
    // df = 1 is a Cauchy: F(t) = 1/2 + atan(t)/pi
    for (double t : {-30.0, -5.0, -1.0, -0.25, 0.0, 0.5, 1.0, 2.5, 40.0}) {
        const double cauchy = 0.5 + std::atan(t) / std::numbers::pi;
        CHECK_THAT(central_t_cdf(t, df(1.0)), WithinAbs(cauchy, 1e-10));
    }
    CHECK_THAT(central_t_cdf(1.0, df(1.0)), WithinAbs(0.75, 1e-12));
    CHECK_THAT(central_t_cdf(-1.0, df(1.0)), WithinAbs(0.25, 1e-12));
}

TEST_CASE("central_t_cdf matches 30-digit reference values", "[noncentral_t]") {
    const struct {
        double t, df, value;
    } anchors[] = {
        {1.0, 2.5, 0.797969486360863267},
        {-2.3, 7.0, 0.0274955476021857881},
        {0.75, 30.0, 0.770451727162835017},
        {-4.0, 500.0, 0.0000364580347018564745},
        {2.0, 1000.0, 0.97711482675337418},
        {-6.0, 3.3, 0.00351360898107169203},
        {12.0, 9.0, 0.999999615005688851},
    };
    for (const auto& a : anchors) {
        CHECK_THAT(central_t_cdf(a.t, df(a.df)), WithinAbs(a.value, 1e-12));
    }
}

TEST_CASE("central_t_cdf symmetry and monotonicity", "[noncentral_t]") {
    for (double v : {1.0, 2.5, 7.0, 30.0, 500.0}) {
        double previous = -1.0;
        for (double t = -8.0; t <= 8.0; t += 0.25) {
            const double p = central_t_cdf(t, df(v));
            CHECK(p >= previous);
            previous = p;
            CHECK_THAT(central_t_cdf(-t, df(v)), WithinAbs(1.0 - p, 1e-12));
        }
    }
}

TEST_CASE("nct_cdf trivial and golden values", "[noncentral_t]") {
    CHECK_THAT(nct_cdf(0.0, df(5.0), 0.0), WithinAbs(0.5, 1e-15));
    // golden CI endpoint check: the located ncp_L reproduces
    // the 0.995 level at t = -2, df = 4
    CHECK_THAT(nct_cdf(-2.0, df(4.0), -5.078125), WithinAbs(0.995, 2e-3));
}

TEST_CASE("nct_cdf equals the central CDF at ncp = 0 and near it", "[noncentral_t]") {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = -6.0 + 12.0 * i / 99.0;
        const double v = 1.0 + 9.0 * (i % 10);
        worst = std::max(worst,
                         std::fabs(nct_cdf(t, df(v), 0.0) - central_t_cdf(t, df(v))));
    }
    CHECK(worst < 1e-10);
    // continuity of the series path as ncp -> 0
    CHECK_THAT(nct_cdf(1.3, df(6.0), 1e-9), WithinAbs(central_t_cdf(1.3, df(6.0)), 1e-8));
    CHECK_THAT(nct_cdf(-0.7, df(3.5), -1e-9), WithinAbs(central_t_cdf(-0.7, df(3.5)), 1e-8));
}

TEST_CASE("nct_cdf matches 30-digit reference values", "[noncentral_t]") {
    // computed with mpmath (mp.dps = 30) via the scaled-chi mixture
    const struct {
        double t, df, ncp, value;
    } anchors[] = {
        {0.5, 7.3, 0.5, 0.493320504382137444},
        {-2, 4, -5.078125, 0.994984683991430975},
        {2, 4, 5.078125, 0.00501531600856902526},
        {1.5, 6.76, 1.9, 0.33582208100540873},
        {3, 10, 2, 0.779171998970208762},
        {-3, 10, -2, 0.220828001029791238},
        {10, 3, 5, 0.85278334220712249},
        {-10, 3, -5, 0.14721665779287751},
        {0, 2, 10, 7.61985302416052607e-24},
        {2, 1000, 1.5, 0.691110725534435679},
        {0.5, 1, 0.3, 0.536187688530385927},
        {25, 30, 22, 0.794579688800730963},
        {-25, 30, -22, 0.205420311199269037},
        {0.001, 5, 0.001, 0.499980664409657899},
        {8, 2.5, 7.7, 0.418764039029695483},
    };
    for (const auto& a : anchors) {
        CHECK_THAT(nct_cdf(a.t, df(a.df), a.ncp), WithinAbs(a.value, 1e-10));
    }
}

TEST_CASE("nct_cdf matches reference values in the large-ncp regime", "[noncentral_t]") {
    const struct {
        double t, df, ncp, value;
    } anchors[] = {
        {60, 1000, 40, 1.0},
        {1, 1000, 40, 0.0},  // true value 7.8e-333, far below double resolution
        {38, 1000, 40, 0.0630008597687732363},
        {45, 1000, 40, 0.999793957282126459},
        {-60, 1, -40, 0.494955778364598171},
        {5, 1, 40, 4.34178559279847339e-15},
        {42, 2, 40, 0.403907722281753776},
        {60, 1, 40, 0.505044221635401829},
        {39, 1, 38, 0.330037259617229538},
        // fractional degrees of freedom (outside the accuracy contract but
        // inside the domain): the substitution path
        {45, 0.5, 40, 0.292108807065933},
        {30, 0.9, 36, 0.227240681649486},
    };
    for (const auto& a : anchors) {
        CHECK_THAT(nct_cdf(a.t, df(a.df), a.ncp), WithinAbs(a.value, 1e-8));
    }
}

TEST_CASE("nct_cdf agrees with the quadrature oracle across the contract box",
          "[noncentral_t]") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> t_dist(-60.0, 60.0);
    std::uniform_real_distribution<double> ncp_dist(-40.0, 40.0);
    std::uniform_real_distribution<double> log_df(0.0, std::log(1000.0));
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double t = t_dist(rng);
        const double ncp = ncp_dist(rng);
        const double v = std::exp(log_df(rng));
        const double mine = nct_cdf(t, df(v), ncp);
        const double ref = oracle::nct_cdf(t, v, ncp);
        worst = std::max(worst, std::fabs(mine - ref));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("series and quadrature paths agree on their overlap", "[noncentral_t]") {
    double worst = 0.0;
    for (double ncp = 24.0; ncp <= 34.0; ncp += 0.5) {
        for (double v : {1.0, 4.0, 27.0, 333.0, 1000.0}) {
            for (double scale : {0.6, 0.9, 1.0, 1.1, 1.5}) {
                const double t = ncp * scale;
                const double series = detail::nct_cdf_series(t, v, ncp);
                const double quad = detail::nct_cdf_quadrature(t, v, ncp);
                worst = std::max(worst, std::fabs(series - quad));
            }
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("nct_cdf is monotone: non-decreasing in t, strictly decreasing in ncp",
          "[noncentral_t]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double v = 1.0 + 60.0 * unit(rng);
        const double ncp = -6.0 + 12.0 * unit(rng);
        double previous = -1.0;
        for (double t = -10.0; t <= 10.0; t += 0.5) {
            const double p = nct_cdf(t, df(v), ncp);
            // the reflection seam at t = 0 may wiggle by an ulp
            CHECK(p >= previous - 1e-14);
            previous = p;
        }
        const double t = -4.0 + 8.0 * unit(rng);
        previous = 2.0;
        for (double d = -8.0; d <= 8.0; d += 0.5) {
            const double p = nct_cdf(t, df(v), d);
            // strict where both values sit away from the saturated tails,
            // where successive gaps dwarf the evaluation noise
            if (previous < 1.0 - 1e-8 && p > 1e-8) {
                CHECK(p < previous);
            } else {
                CHECK(p <= previous + 1e-14);
            }
            previous = p;
        }
    }
}

TEST_CASE("nct_cdf agrees with a 1e6-draw Monte Carlo CDF at (df=6.76, ncp=1.9)",
          "[noncentral_t][slow]") {
    oracle::Sampler sampler(123456789ULL);
    constexpr int n_draws = 1'000'000;
    const double points[5] = {0.4, 1.2, 1.9, 2.6, 4.0};
    int counts[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < n_draws; ++i) {
        const double draw = sampler.noncentral_t(6.76, 1.9);
        for (int k = 0; k < 5; ++k) {
            if (draw <= points[k]) ++counts[k];
        }
    }
    for (int k = 0; k < 5; ++k) {
        const double empirical = static_cast<double>(counts[k]) / n_draws;
        const double p = nct_cdf(points[k], df(6.76), 1.9);
        const double se = std::sqrt(p * (1.0 - p) / n_draws);
        CHECK_THAT(empirical, WithinAbs(p, 4.0 * se));
    }
}

TEST_CASE("nct_cdf rejects non-finite input", "[noncentral_t]") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(nct_cdf(nan, df(5.0), 1.0), DomainError);
    CHECK_THROWS_AS(nct_cdf(inf, df(5.0), 1.0), DomainError);
    CHECK_THROWS_AS(nct_cdf(0.0, df(5.0), nan), DomainError);
    CHECK_THROWS_AS(central_t_cdf(nan, df(5.0)), DomainError);
}
