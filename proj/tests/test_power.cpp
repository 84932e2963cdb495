#include <doctest.h>

#include <cmath>

#include "screenlab/errors.hpp"
#include "screenlab/power.hpp"

using namespace screenlab;

TEST_CASE("normal quantile against reference values") {
    // scipy.stats.norm.ppf
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.8) == doctest::Approx(0.8416212335729143).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-10));
    CHECK(normal_quantile(0.3) == doctest::Approx(-normal_quantile(0.7)).epsilon(1e-14));
}

TEST_CASE("minimum detectable effect") {
    CHECK(std::abs(mde(1.0, 0.05, 0.8) - (1.959963984540054 + 0.8416212335729143)) < 1e-5);
    CHECK(mde(0.5, 0.05, 0.8) == doctest::Approx(0.5 * mde(1.0, 0.05, 0.8)));
}

TEST_CASE("predicted se ratio is sqrt(r)") {
    CHECK(predicted_se_ratio(0.25) == doctest::Approx(0.5));
    CHECK(predicted_se_ratio(0.81) == doctest::Approx(0.9));
    CHECK(predicted_se_ratio(0.49) == doctest::Approx(0.7));
    CHECK(predicted_se_ratio(1.0) == 1.0);
    double prev = 0.0;
    for (double r = 0.05; r <= 1.0; r += 0.05) {
        CHECK(predicted_se_ratio(r) > prev);
        prev = predicted_se_ratio(r);
    }
    CHECK_THROWS_AS(predicted_se_ratio(0.0), Error);
    CHECK_THROWS_AS(predicted_se_ratio(1.2), Error);
}

TEST_CASE("design se closed form") {
    // sqrt(1 / (n pi^2 q (1 - q)))
    CHECK(design_se(0.25, 10000, 1.0, 0.5) == doctest::Approx(std::sqrt(1.0 / (10000 * 0.0625 * 0.25))));
}

TEST_CASE("gain report") {
    PowerSpec spec;
    spec.se_unscreened = 0.08;
    spec.r_candidates = {0.25, 0.1, 1.0};
    const auto g = gain_report(0.25, spec);
    CHECK(g.optimal_r == 0.25);
    CHECK(g.optimal_se_ratio == doctest::Approx(0.5));
    CHECK(g.mde_reduction == doctest::Approx(0.5));
    CHECK(*g.se_screened == doctest::Approx(0.04));
    CHECK(*g.mde_screened == doctest::Approx(0.5 * *g.mde_unscreened));
    REQUIRE(g.candidates.size() == 3);
    CHECK(g.candidates[1].complier_retaining == false);

    CHECK(gain_report(1.0, PowerSpec{}).optimal_se_ratio == 1.0);
    CHECK_THROWS_AS(gain_report(0.0, PowerSpec{}), Error);
    CHECK_THROWS_AS(gain_report(-0.2, PowerSpec{}), Error);
}
