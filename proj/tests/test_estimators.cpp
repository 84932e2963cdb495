#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "screenlab/dgp.hpp"
#include "screenlab/errors.hpp"
#include "screenlab/estimators.hpp"
#include "screenlab/screening.hpp"

using namespace screenlab;

namespace {

Sample from_columns(const std::vector<int>& z, const std::vector<double>& d, const std::vector<double>& y) {
    std::vector<Unit> units(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        units[i].z = z[i];
        units[i].d = d[i];
        units[i].y = y[i];
    }
    return make_sample(std::move(units), DgpKind::External);
}

// Just-identified 2SLS by matrices: b = (Z'X)^-1 Z'y with Z = [1 z], X = [1 d];
// homoscedastic V = s2 (Z'X)^-1 Z'Z (X'Z)^-1 with s2 = e'e / n.
struct Oracle {
    double beta, se;
};

Oracle matrix_2sls(const Sample& s) {
    using M = std::array<std::array<double, 2>, 2>;
    M zx{}, zz{};
    std::array<double, 2> zy{};
    for (const auto& u : s.units) {
        const double zr[2] = {1.0, double(u.z)}, xr[2] = {1.0, u.d};
        for (int i = 0; i < 2; ++i) {
            zy[i] += zr[i] * u.y;
            for (int j = 0; j < 2; ++j) {
                zx[i][j] += zr[i] * xr[j];
                zz[i][j] += zr[i] * zr[j];
            }
        }
    }
    const double det = zx[0][0] * zx[1][1] - zx[0][1] * zx[1][0];
    const M inv{{{zx[1][1] / det, -zx[0][1] / det}, {-zx[1][0] / det, zx[0][0] / det}}};
    const double b0 = inv[0][0] * zy[0] + inv[0][1] * zy[1];
    const double b1 = inv[1][0] * zy[0] + inv[1][1] * zy[1];
    double ee = 0;
    for (const auto& u : s.units) ee += std::pow(u.y - b0 - b1 * u.d, 2);
    const double s2 = ee / double(s.size());
    // V = inv * zz * inv'
    double v11 = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) v11 += inv[1][i] * zz[i][j] * inv[1][j];
    return {b1, std::sqrt(s2 * v11)};
}

}  // namespace

TEST_CASE("hand-computed Wald example") {
    const auto s = apply_screen(from_columns({1, 1, 0, 0}, {1, 0, 0, 0}, {3, 1, 1, 1}), ScreenMechanism::NoScreen);
    CHECK(first_stage(s) == doctest::Approx(0.5));
    CHECK(wald(s) == doctest::Approx(2.0));
}

TEST_CASE("Wald and its se match the matrix 2SLS oracle") {
    for (Seed seed = 1; seed <= 20; ++seed) {
        DiscreteDgpConfig cfg;
        cfg.n = 60 + 20 * seed;
        cfg.beta_always = 0.5 * static_cast<double>(seed);
        const auto raw = generate_discrete(cfg, seed);
        const auto s = apply_screen(raw, ScreenMechanism::NoScreen);
        const auto o = matrix_2sls(raw);
        const auto r = estimate(s, Sign::Positive);
        CHECK(r.beta_hat == doctest::Approx(o.beta).epsilon(1e-10));
        CHECK(r.se == doctest::Approx(o.se).epsilon(1e-9));
    }
}

TEST_CASE("estimates on a screened sample use only retained units") {
    DiscreteDgpConfig cfg;
    cfg.n = 3000;
    const auto raw = generate_discrete(cfg, 77);
    std::vector<Unit> kept;
    for (const auto& u : raw.units)
        if (*u.true_type == UnitType::Complier) kept.push_back(u);
    const auto o = matrix_2sls(make_sample(kept, DgpKind::External));
    const auto r = estimate(apply_screen(raw, ScreenMechanism::OracleComplier), Sign::Positive);
    CHECK(r.beta_hat == doctest::Approx(o.beta).epsilon(1e-10));
    CHECK(r.se == doctest::Approx(o.se).epsilon(1e-9));
    CHECK(r.pi_hat == doctest::Approx(1.0));
    CHECK(r.n_used == kept.size());
}

TEST_CASE("se formula: scaling the first stage by k scales se by 1/k") {
    // d in {0, 1} vs {0, 2}: same residuals after rescaling beta, first stage doubles.
    DiscreteDgpConfig cfg;
    cfg.n = 500;
    const auto raw = generate_discrete(cfg, 4);
    auto doubled = raw;
    for (auto& u : doubled.units) u.d *= 2.0;
    const auto a = estimate(apply_screen(raw, ScreenMechanism::NoScreen), Sign::Positive);
    const auto b = estimate(apply_screen(doubled, ScreenMechanism::NoScreen), Sign::Positive);
    CHECK(b.pi_hat == doctest::Approx(2.0 * a.pi_hat));
    CHECK(b.se == doctest::Approx(a.se / 2.0).epsilon(1e-10));
}

TEST_CASE("residual variance estimates sigma_u^2") {
    DiscreteDgpConfig cfg;
    cfg.n = 200000;
    const auto s = apply_screen(generate_discrete(cfg, 31), ScreenMechanism::NoScreen);
    const double b = wald(s);
    CHECK(std::abs(residual_variance(s, b) - 1.0) < 0.02);
    CHECK(residual_variance(s, b, VarianceDivisor::NMinus2) > residual_variance(s, b));
}

TEST_CASE("sign screen and first-stage errors") {
    CHECK(sign_screen(0.1, Sign::Positive));
    CHECK_FALSE(sign_screen(-0.1, Sign::Positive));
    CHECK(sign_screen(-0.1, Sign::Negative));
    CHECK_FALSE(sign_screen(0.0, Sign::Positive));

    const auto flat = apply_screen(from_columns({1, 1, 0, 0}, {1, 0, 1, 0}, {1, 2, 3, 4}), ScreenMechanism::NoScreen);
    try {
        wald(flat);
        FAIL("expected WeakFirstStage");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WeakFirstStage);
    }
    const auto one_arm = apply_screen(from_columns({1, 1}, {1, 0}, {1, 2}), ScreenMechanism::NoScreen);
    CHECK_THROWS_AS(arm_means(one_arm), Error);
}
