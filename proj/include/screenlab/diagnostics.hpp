#pragma once

// Screening diagnostics on a pseudo-screened sample (stated types elicited,
// experiment run on everyone).
//
// The complier-retention rate P[stated complier | complier] is the IV
// coefficient of (stated * d) on d with z as instrument. The true-negative
// rate P[stated non-complier | non-complier] follows from the law of total
// probability using the retention rate and the first stage as the complier
// share. Both are tested against the boundary null value 1 with a stratified
// bootstrap, one-sided with alternative < 1.

#include <cstdint>
#include <span>
#include <string_view>

#include "screenlab/dgp.hpp"
#include "screenlab/kernels.hpp"

namespace screenlab {

inline constexpr int kDefaultBootstrapReps = 999;
inline constexpr double kDefaultAlpha = 0.05;

/// Mean of a unit attribute x among compliers:
/// [mean(x*d | z=1) - mean(x*d | z=0)] / [mean(d | z=1) - mean(d | z=0)].
double complier_mean(const Sample& s, std::span<const double> x);

double retention_estimate(const Sample& s);

struct RetentionEstimate {
    double theta_hat = 0.0;
    double theta_display = 0.0;  // clamped to [0,1]
    double se_boot = 0.0;
    double ci_upper_one_sided = 0.0;
    double p_value = 1.0;
    double alpha = kDefaultAlpha;
    bool rejected = false;
    int n_boot = 0;
};

struct TnrComponents {
    double p_stated_noncomplier = 0.0;
    double p_complier = 0.0;
    double p_stated_noncomplier_given_complier = 0.0;
};

/// (P[stated=0] - P[CM=1] * P[stated=0 | CM=1]) / (1 - P[CM=1]).
double tnr_formula(const TnrComponents& c);

struct TnrEstimate {
    double tnr_hat = 0.0;
    double tnr_display = 0.0;
    TnrComponents components;
    double se_boot = 0.0;
    double ci_upper_one_sided = 0.0;
    double p_value = 1.0;  // 1 until a test has been run
    double alpha = kDefaultAlpha;
    bool rejected = false;
    int n_boot = 0;
};

TnrEstimate tnr_estimate(const Sample& s);

RetentionEstimate retention_test(const Sample& s, double alpha, int n_boot, Seed seed,
                                 const ParallelOptions& opts = {});
TnrEstimate tnr_test(const Sample& s, double alpha, int n_boot, Seed seed, const ParallelOptions& opts = {});

enum class Recommendation { Screened, Unscreened };
std::string_view to_string(Recommendation r);

/// Unscreened iff the retention test rejects.
Recommendation recommend(const RetentionEstimate& retention) noexcept;

// Resampling support, exposed for the kernels' tests and the benchmark.
StratifiedCodes stratified_codes(const Sample& s);
double retention_from_counts(const CellCounts& c);
double tnr_from_counts(const CellCounts& c);

}  // namespace screenlab
