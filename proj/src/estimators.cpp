#include "screenlab/estimators.hpp"

#include <cmath>
#include <string>

#include "screenlab/errors.hpp"

namespace screenlab {

namespace {

void require_strong(double pi_hat) {
    if (!(std::abs(pi_hat) >= kWeakFirstStage))
        throw Error(ErrorCode::WeakFirstStage, "first stage " + std::to_string(pi_hat) + " is numerically zero");
}

}  // namespace

ArmMeans arm_means(const ScreenedSample& s) {
    ArmMeans m;
    for (const auto& u : s.sample.units) {
        if (!s.uses(u)) continue;
        if (u.z == 1) {
            ++m.n1;
            m.y1 += u.y;
            m.d1 += u.d;
        } else {
            ++m.n0;
            m.y0 += u.y;
            m.d0 += u.d;
        }
    }
    if (m.n1 == 0 || m.n0 == 0) throw Error(ErrorCode::EmptyArm, "an instrument arm has no screened-in units");
    m.y1 /= static_cast<double>(m.n1);
    m.d1 /= static_cast<double>(m.n1);
    m.y0 /= static_cast<double>(m.n0);
    m.d0 /= static_cast<double>(m.n0);
    return m;
}

double first_stage(const ScreenedSample& s) {
    const auto m = arm_means(s);
    return m.d1 - m.d0;
}

double wald(const ScreenedSample& s) {
    const auto m = arm_means(s);
    const double pi_hat = m.d1 - m.d0;
    require_strong(pi_hat);
    return (m.y1 - m.y0) / pi_hat;
}

double residual_variance(const ScreenedSample& s, double beta_hat, VarianceDivisor divisor) {
    double sum_y = 0.0, sum_d = 0.0;
    std::size_t n = 0;
    for (const auto& u : s.sample.units) {
        if (!s.uses(u)) continue;
        sum_y += u.y;
        sum_d += u.d;
        ++n;
    }
    const double alpha_hat = sum_y / static_cast<double>(n) - beta_hat * (sum_d / static_cast<double>(n));
    double ss = 0.0;
    for (const auto& u : s.sample.units) {
        if (!s.uses(u)) continue;
        const double e = u.y - alpha_hat - beta_hat * u.d;
        ss += e * e;
    }
    const double denom = divisor == VarianceDivisor::N ? static_cast<double>(n) : static_cast<double>(n) - 2.0;
    return ss / denom;
}

double iv_standard_error(const ScreenedSample& s, double beta_hat, VarianceDivisor divisor) {
    const auto m = arm_means(s);
    const double pi_hat = m.d1 - m.d0;
    require_strong(pi_hat);
    const double q = m.share_treated();
    const double var_z = q * (1.0 - q);
    const double sigma2 = residual_variance(s, beta_hat, divisor);
    return std::sqrt(sigma2 / (static_cast<double>(m.n()) * pi_hat * pi_hat * var_z));
}

bool sign_screen(double pi_hat, Sign population_sign) noexcept {
    if (pi_hat == 0.0 || std::isnan(pi_hat)) return false;
    return (pi_hat > 0.0) == (population_sign == Sign::Positive);
}

EstimateReport estimate(const ScreenedSample& s, Sign population_sign, VarianceDivisor divisor) {
    EstimateReport r;
    const auto m = arm_means(s);
    r.pi_hat = m.d1 - m.d0;
    require_strong(r.pi_hat);
    r.beta_hat = (m.y1 - m.y0) / r.pi_hat;
    const double sigma2 = residual_variance(s, r.beta_hat, divisor);
    const double q = m.share_treated();
    r.se = std::sqrt(sigma2 / (static_cast<double>(m.n()) * r.pi_hat * r.pi_hat * q * (1.0 - q)));
    r.sigma_u_hat = std::sqrt(sigma2);
    r.n_used = m.n();
    r.retention_fraction = s.retention_fraction;
    r.sign_screen_pass = sign_screen(r.pi_hat, population_sign);
    return r;
}

}  // namespace screenlab
