#pragma once

// Design-stage planning: how much a complier-retaining screen that keeps a
// fraction r of the sample shrinks the standard error and the minimum
// detectable effect.

#include <cstddef>
#include <optional>
#include <vector>

namespace screenlab {

/// Standard normal quantile. Acklam's rational approximation followed by one
/// Halley step against erfc; absolute error below 1e-12 on (1e-300, 1 - 1e-16).
double normal_quantile(double p);

/// sqrt(r). Throws InvalidRetention outside (0,1].
double predicted_se_ratio(double r);

/// (z_{1-alpha/2} + z_{power}) * se, two-sided test.
double mde(double se, double alpha, double target_power);

/// Homoscedastic IV standard error from design inputs.
double design_se(double pi, std::size_t n, double sigma_u, double q);

struct SeInputs {
    double pi_hat = 0.0;
    std::size_t n = 0;
    double sigma_u = 1.0;
    double q = 0.5;
};

struct PowerSpec {
    double alpha = 0.05;
    double target_power = 0.8;
    std::optional<double> se_unscreened;
    std::optional<SeInputs> se_inputs;
    std::vector<double> r_candidates;

    void validate() const;
    /// Explicit se if given, else computed from se_inputs, else nullopt.
    std::optional<double> unscreened_se() const;
};

struct GainRow {
    double r = 1.0;
    double se_ratio = 1.0;
    bool complier_retaining = true;  // r >= pi_hat
    std::optional<double> se;
    std::optional<double> mde;
};

struct GainReport {
    double pi_hat = 0.0;
    double alpha = 0.05;
    double target_power = 0.8;
    double optimal_r = 1.0;
    double optimal_se_ratio = 1.0;
    double mde_reduction = 0.0;  // 1 - optimal ratio
    std::optional<double> se_unscreened, se_screened;
    std::optional<double> mde_unscreened, mde_screened;
    std::vector<GainRow> candidates;
};

/// The optimal complier-retaining screen keeps only compliers: r = pi_hat.
GainReport gain_report(double pi_hat, const PowerSpec& spec);

}  // namespace screenlab
