#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "screenlab/diagnostics.hpp"
#include "screenlab/dgp.hpp"
#include "screenlab/errors.hpp"
#include "screenlab/kernels.hpp"

using namespace screenlab;

namespace {

Sample tiny(const std::vector<int>& z, const std::vector<double>& d, const std::vector<bool>& stated) {
    std::vector<Unit> units(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        units[i].z = z[i];
        units[i].d = d[i];
        units[i].y = 0.0;
        units[i].stated_complier = stated[i];
    }
    return make_sample(std::move(units), DgpKind::External);
}

Sample discrete(double eps1, double eps2, std::size_t n, Seed seed, double p_always = 0.35) {
    DiscreteDgpConfig cfg;
    cfg.p_always = p_always;
    cfg.p_never = 0.75 - p_always;
    cfg.n = n;
    cfg.eps1 = eps1;
    cfg.eps2 = eps2;
    return generate_discrete(cfg, seed);
}

}  // namespace

TEST_CASE("hand-computed retention and true-negative rate") {
    const auto s = tiny({1, 1, 0, 0}, {1, 0, 0, 0}, {true, false, false, false});
    CHECK(retention_estimate(s) == doctest::Approx(1.0));
    CHECK(tnr_formula({0.6, 0.5, 0.2}) == doctest::Approx(1.0));
    CHECK(tnr_formula({0.5, 0.25, 0.0}) == doctest::Approx(0.5 / 0.75));
}

TEST_CASE("complier mean of a constant is the constant; of the complier indicator is about 1") {
    const auto s = discrete(0.0, 0.0, 100000, 3);
    std::vector<double> ones(s.size(), 1.0), is_c(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) is_c[i] = *s.units[i].true_type == UnitType::Complier;
    CHECK(complier_mean(s, ones) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(complier_mean(s, is_c) - 1.0) < 0.02);
}

TEST_CASE("retention and true-negative estimates recover 1 - eps2 and 1 - eps1") {
    CHECK(std::abs(retention_estimate(discrete(0.0, 0.2, 100000, 11)) - 0.8) < 0.02);
    CHECK(std::abs(tnr_estimate(discrete(0.1, 0.0, 100000, 12)).tnr_hat - 0.9) < 0.02);
}

TEST_CASE("count-based statistics equal the direct estimators") {
    const auto s = discrete(0.1, 0.15, 3000, 5);
    const auto counts = count_cells(stratified_codes(s));
    CHECK(retention_from_counts(counts) == doctest::Approx(retention_estimate(s)).epsilon(1e-12));
    CHECK(tnr_from_counts(counts) == doctest::Approx(tnr_estimate(s).tnr_hat).epsilon(1e-12));
}

TEST_CASE("serial and parallel bootstrap are bitwise identical") {
    const auto codes = stratified_codes(discrete(0.1, 0.1, 2000, 6));
    const auto a = bootstrap_replicates_serial(codes, retention_from_counts, 500, 99);
    for (int threads : {1, 2, 3, 8}) {
        const auto b = bootstrap_replicates_parallel(codes, retention_from_counts, 500, 99, threads);
        REQUIRE(a.size() == b.size());
        bool same = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            same = same && std::bit_cast<std::uint64_t>(a[i]) == std::bit_cast<std::uint64_t>(b[i]);
        CHECK(same);
    }
}

TEST_CASE("stratified resampling keeps arm sizes") {
    const auto codes = stratified_codes(discrete(0.0, 0.0, 1001, 8));
    for (std::uint64_t b = 0; b < 20; ++b) {
        const auto c = resample_cells(codes, 1, b);
        CHECK(c.arm_total(0) == codes.arm0.size());
        CHECK(c.arm_total(1) == codes.arm1.size());
    }
}

TEST_CASE("retention test: accepts truthful reports, rejects wholesale misreporting") {
    // Without always-takers and with truthful compliers every replicate is exactly 1.
    const auto ok = retention_test(discrete(0.0, 0.0, 2000, 21, 0.0), 0.05, 499, 1);
    CHECK(ok.theta_hat == 1.0);
    CHECK(ok.p_value == 1.0);
    CHECK_FALSE(ok.rejected);
    CHECK(recommend(ok) == Recommendation::Screened);

    const auto bad = retention_test(discrete(0.0, 1.0, 2000, 22), 0.05, 499, 1);
    CHECK(bad.rejected);
    CHECK(bad.p_value == doctest::Approx(1.0 / 500.0));
    CHECK(recommend(bad) == Recommendation::Unscreened);
    CHECK(bad.theta_display >= 0.0);
}

TEST_CASE("test argument and data errors") {
    const auto s = discrete(0.0, 0.0, 500, 1);
    CHECK_THROWS_AS(retention_test(s, 0.05, 100, 1), Error);
    CHECK_THROWS_AS(retention_test(s, 0.6, 999, 1), Error);
    CHECK_THROWS_AS(retention_estimate(without_stated_types(s)), Error);

    // Everyone a complier: the true-negative rate has no denominator.
    const auto all_c = tiny({1, 1, 0, 0}, {1, 1, 0, 0}, {true, true, true, true});
    try {
        tnr_estimate(all_c);
        FAIL("expected AllCompliers");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AllCompliers);
    }
}
