#include "screenlab/power.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "screenlab/errors.hpp"

namespace screenlab {

namespace {

void require_retention(double r) {
    if (!(std::isfinite(r) && r > 0.0 && r <= 1.0))
        throw Error(ErrorCode::InvalidRetention, "retention fraction must lie in (0,1], got " + std::to_string(r));
}

double acklam(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    double x = acklam(p);
    // Halley refinement.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double predicted_se_ratio(double r) {
    require_retention(r);
    return std::sqrt(r);
}

double mde(double se, double alpha, double target_power) {
    return (normal_quantile(1.0 - alpha / 2.0) + normal_quantile(target_power)) * se;
}

double design_se(double pi, std::size_t n, double sigma_u, double q) {
    return std::sqrt(sigma_u * sigma_u / (static_cast<double>(n) * pi * pi * q * (1.0 - q)));
}

void PowerSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0,1)");
    if (!(target_power > 0.5 && target_power < 1.0))
        throw Error(ErrorCode::InvalidConfig, "power must lie in (0.5,1)");
    if (se_unscreened && !(*se_unscreened > 0.0)) throw Error(ErrorCode::InvalidConfig, "se must be positive");
    if (se_inputs) {
        const auto& in = *se_inputs;
        if (!(in.pi_hat != 0.0 && in.n > 0 && in.sigma_u > 0.0 && in.q > 0.0 && in.q < 1.0))
            throw Error(ErrorCode::InvalidConfig, "se inputs need pi != 0, n > 0, sigma_u > 0, q in (0,1)");
    }
    for (double r : r_candidates) require_retention(r);
}

std::optional<double> PowerSpec::unscreened_se() const {
    if (se_unscreened) return se_unscreened;
    if (se_inputs) return design_se(se_inputs->pi_hat, se_inputs->n, se_inputs->sigma_u, se_inputs->q);
    return std::nullopt;
}

GainReport gain_report(double pi_hat, const PowerSpec& spec) {
    if (!(std::isfinite(pi_hat) && pi_hat > 0.0 && pi_hat <= 1.0))
        throw Error(ErrorCode::InvalidRetention, "pi_hat must lie in (0,1], got " + std::to_string(pi_hat));
    spec.validate();
    GainReport g;
    g.pi_hat = pi_hat;
    g.alpha = spec.alpha;
    g.target_power = spec.target_power;
    g.optimal_r = pi_hat;
    g.optimal_se_ratio = predicted_se_ratio(pi_hat);
    g.mde_reduction = 1.0 - g.optimal_se_ratio;
    g.se_unscreened = spec.unscreened_se();
    if (g.se_unscreened) {
        g.se_screened = *g.se_unscreened * g.optimal_se_ratio;
        g.mde_unscreened = mde(*g.se_unscreened, spec.alpha, spec.target_power);
        g.mde_screened = mde(*g.se_screened, spec.alpha, spec.target_power);
    }
    for (double r : spec.r_candidates) {
        GainRow row;
        row.r = r;
        row.se_ratio = predicted_se_ratio(r);
        row.complier_retaining = r >= pi_hat;
        if (g.se_unscreened) {
            row.se = *g.se_unscreened * row.se_ratio;
            row.mde = mde(*row.se, spec.alpha, spec.target_power);
        }
        g.candidates.push_back(row);
    }
    return g;
}

}  // namespace screenlab
