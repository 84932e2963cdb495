#pragma once

// Replicated experiments.
//
// A scenario fixes one data-generating process and a list of arms: screening
// mechanisms for the discrete world (all applied to the same replication
// sample), retention fractions for the Gaussian world (one sample per
// replication and arm). Replication k draws from seeds derived from
// (base_seed, k), so the table is the same for any number of worker threads.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "screenlab/dgp.hpp"
#include "screenlab/estimators.hpp"
#include "screenlab/kernels.hpp"
#include "screenlab/screening.hpp"

namespace screenlab {

struct Scenario {
    std::variant<DiscreteDgpConfig, GaussianDgpConfig> dgp = DiscreteDgpConfig{};
    std::vector<ScreenMechanism> mechanisms{ScreenMechanism::NoScreen, ScreenMechanism::OracleComplier};
    std::vector<double> r_values{1.0};
    Sign population_sign = Sign::Positive;
    bool apply_sign_screen = false;
    std::size_t n_reps = 2000;
    Seed base_seed = 0;

    bool is_gaussian() const noexcept { return std::holds_alternative<GaussianDgpConfig>(dgp); }
    std::size_t arm_count() const noexcept;
    std::string arm_label(std::size_t arm) const;
    void validate() const;
};

enum class DiscardReason { None, SignScreen, WeakFirstStage, EmptyArm, EmptyScreen, GenerationFailed, Other };
std::string_view to_string(DiscardReason r);

struct RepRow {
    std::size_t rep_index = 0;
    std::size_t arm = 0;
    double beta_hat = 0.0;
    double pi_hat = 0.0;
    double se = 0.0;
    double retention_fraction = 0.0;
    bool sign_screen_pass = false;
    bool discarded = false;
    DiscardReason reason = DiscardReason::None;
};

struct RepTable {
    std::vector<std::string> arm_labels;
    std::size_t n_reps = 0;
    std::vector<RepRow> rows;  // ordered by (rep_index, arm)

    const RepRow& at(std::size_t rep, std::size_t arm) const { return rows[rep * arm_labels.size() + arm]; }
};

RepTable run_scenario(const Scenario& sc, const ParallelOptions& opts = {});

inline constexpr std::array<double, 4> kAbsBiasProbs{0.25, 0.5, 0.75, 0.9};

struct ArmSummary {
    std::string label;
    std::size_t n_reps = 0;
    std::size_t n_kept = 0;
    double mean_beta = 0.0, mean_beta_mcse = 0.0;
    double empirical_sd = 0.0, empirical_sd_mcse = 0.0;
    double median_abs_bias = 0.0, median_abs_bias_mcse = 0.0;
    std::array<double, 4> abs_bias_quantiles{};
    std::array<double, 4> abs_bias_quantile_mcse{};
    double mean_se = 0.0, mean_se_mcse = 0.0;
    double mean_pi_hat = 0.0;
    double mean_retention = 0.0;
    double discard_rate = 0.0, discard_rate_mcse = 0.0;
};

struct McSummary {
    double beta_target = 0.0;
    std::vector<ArmSummary> arms;
    // Set when a diagnostic size/power run is attached.
    std::optional<std::string> diagnostic;
    std::optional<double> rejection_rate, rejection_rate_mcse;

    const ArmSummary& arm(std::string_view label) const;
};

/// Throws AllDiscarded if an arm has no kept replications.
McSummary summarize(const RepTable& t, double beta_target);

enum class Diagnostic { RetentionTest, TnrTest };
std::string_view to_string(Diagnostic d);

struct SizePowerResult {
    std::size_t n_reps = 0;
    std::size_t n_valid = 0;
    std::size_t rejections = 0;
    double rejection_rate = 0.0;
    double mcse = 0.0;
    std::vector<double> p_values;  // NaN where the replication failed
};

/// Runs the diagnostic once per replication on the full sample of a discrete
/// scenario. Replications run in parallel; each bootstrap runs serially.
SizePowerResult size_power_run(const Scenario& sc, Diagnostic diagnostic, double alpha, int n_boot,
                               const ParallelOptions& opts = {});

}  // namespace screenlab
