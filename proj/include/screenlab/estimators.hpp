#pragma once

// Wald / 2SLS estimation with a single binary instrument.

#include <cstddef>

#include "screenlab/screening.hpp"

namespace screenlab {

enum class Sign { Positive, Negative };

/// Residual-variance divisor. N matches the population algebra; NMinus2 is
/// the small-sample convention.
enum class VarianceDivisor { N, NMinus2 };

inline constexpr double kWeakFirstStage = 1e-12;

struct EstimateReport {
    double beta_hat = 0.0;
    double pi_hat = 0.0;
    double se = 0.0;
    std::size_t n_used = 0;
    double retention_fraction = 1.0;
    bool sign_screen_pass = false;
    double sigma_u_hat = 0.0;
};

/// Arm sizes and means over the units a screened sample uses.
struct ArmMeans {
    std::size_t n1 = 0, n0 = 0;
    double y1 = 0.0, y0 = 0.0;
    double d1 = 0.0, d0 = 0.0;

    std::size_t n() const noexcept { return n1 + n0; }
    double share_treated() const noexcept { return static_cast<double>(n1) / static_cast<double>(n()); }
};

/// Throws EmptyArm when either arm has no used units.
ArmMeans arm_means(const ScreenedSample& s);

double first_stage(const ScreenedSample& s);
double wald(const ScreenedSample& s);
double residual_variance(const ScreenedSample& s, double beta_hat, VarianceDivisor divisor = VarianceDivisor::N);
double iv_standard_error(const ScreenedSample& s, double beta_hat, VarianceDivisor divisor = VarianceDivisor::N);
bool sign_screen(double pi_hat, Sign population_sign) noexcept;

EstimateReport estimate(const ScreenedSample& s, Sign population_sign,
                        VarianceDivisor divisor = VarianceDivisor::N);

}  // namespace screenlab
