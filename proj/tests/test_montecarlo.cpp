#include <doctest.h>

#include <bit>
#include <cmath>

#include "screenlab/errors.hpp"
#include "screenlab/montecarlo.hpp"
#include "screenlab/stats.hpp"

using namespace screenlab;

namespace {

bool same_rows(const RepTable& a, const RepTable& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto &x = a.rows[i], &y = b.rows[i];
        if (std::bit_cast<std::uint64_t>(x.beta_hat) != std::bit_cast<std::uint64_t>(y.beta_hat) ||
            std::bit_cast<std::uint64_t>(x.se) != std::bit_cast<std::uint64_t>(y.se) || x.discarded != y.discarded)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("replication table does not depend on the worker count") {
    Scenario sc;
    DiscreteDgpConfig cfg;
    cfg.n = 400;
    cfg.eps2 = 0.1;
    sc.dgp = cfg;
    sc.mechanisms = {ScreenMechanism::NoScreen, ScreenMechanism::OracleComplier, ScreenMechanism::StatedComplier};
    sc.n_reps = 200;
    sc.base_seed = 5;
    const auto serial = run_scenario(sc, {Execution::Serial, 1});
    CHECK(same_rows(serial, run_scenario(sc, {Execution::Parallel, 2})));
    CHECK(same_rows(serial, run_scenario(sc, {Execution::Parallel, 7})));
}

TEST_CASE("gaussian table shape and arm labels") {
    Scenario sc;
    sc.dgp = GaussianDgpConfig{};
    sc.r_values = {0.25, 1.0};
    sc.n_reps = 20000;
    sc.apply_sign_screen = true;
    const auto t = run_scenario(sc);
    CHECK(t.rows.size() == 40000);
    CHECK(t.arm_labels == std::vector<std::string>{"r=0.25", "r=1"});
    CHECK(t.at(123, 1).rep_index == 123);
    CHECK(t.at(123, 0).retention_fraction == 0.25);
    for (const auto& r : t.rows)
        if (r.discarded) CHECK(r.reason == DiscardReason::SignScreen);
}

TEST_CASE("noiseless scenario has zero spread") {
    Scenario sc;
    DiscreteDgpConfig cfg;
    cfg.n = 300;
    cfg.sigma_u = 0.0;
    sc.dgp = cfg;
    sc.n_reps = 50;
    const auto s = summarize(run_scenario(sc), 2.0);
    for (const auto& a : s.arms) {
        CHECK(a.mean_beta == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(a.empirical_sd < 1e-12);
        CHECK(a.discard_rate == 0.0);
    }
}

TEST_CASE("summary errors when an arm keeps nothing") {
    RepTable t;
    t.arm_labels = {"none"};
    t.n_reps = 2;
    RepRow r;
    r.discarded = true;
    r.reason = DiscardReason::SignScreen;
    t.rows = {r, r};
    t.rows[1].rep_index = 1;
    try {
        summarize(t, 1.0);
        FAIL("expected AllDiscarded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AllDiscarded);
    }
}

TEST_CASE("summary statistics match direct computation") {
    Scenario sc;
    DiscreteDgpConfig cfg;
    cfg.n = 500;
    sc.dgp = cfg;
    sc.n_reps = 300;
    sc.base_seed = 9;
    const auto t = run_scenario(sc);
    const auto s = summarize(t, 2.0);
    std::vector<double> b, ab;
    for (std::size_t rep = 0; rep < t.n_reps; ++rep) {
        b.push_back(t.at(rep, 0).beta_hat);
        ab.push_back(std::abs(t.at(rep, 0).beta_hat - 2.0));
    }
    const auto& none = s.arm("none");
    CHECK(none.mean_beta == doctest::Approx(stats::mean(b)));
    CHECK(none.empirical_sd == doctest::Approx(stats::sd(b)));
    CHECK(none.median_abs_bias == doctest::Approx(stats::quantile(ab, 0.5)));
    CHECK(none.mean_beta_mcse == doctest::Approx(stats::sd(b) / std::sqrt(300.0)));
}

TEST_CASE("quantiles use linear interpolation") {
    // numpy.quantile([1, 2, 3, 4, 10], [0.25, 0.5, 0.9]) -> 2, 3, 7.6
    std::vector<double> x{4, 1, 10, 3, 2};
    CHECK(stats::quantile(x, 0.25) == doctest::Approx(2.0));
    CHECK(stats::quantile(x, 0.5) == doctest::Approx(3.0));
    CHECK(stats::quantile(x, 0.9) == doctest::Approx(7.6));
}

TEST_CASE("scenario validation") {
    Scenario sc;
    sc.n_reps = 0;
    CHECK_THROWS_AS(sc.validate(), Error);
    Scenario g;
    g.dgp = GaussianDgpConfig{};
    g.r_values = {0.0};
    CHECK_THROWS_AS(g.validate(), Error);
}
