#include "screenlab/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "screenlab/diagnostics.hpp"
#include "screenlab/errors.hpp"
#include "screenlab/stats.hpp"

namespace screenlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

DiscardReason reason_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::WeakFirstStage: return DiscardReason::WeakFirstStage;
        case ErrorCode::EmptyArm: return DiscardReason::EmptyArm;
        case ErrorCode::EmptyScreen: return DiscardReason::EmptyScreen;
        case ErrorCode::DegenerateAssignment: return DiscardReason::GenerationFailed;
        default: return DiscardReason::Other;
    }
}

RepRow failed_row(std::size_t rep, std::size_t arm, DiscardReason reason) {
    RepRow row;
    row.rep_index = rep;
    row.arm = arm;
    row.beta_hat = row.pi_hat = row.se = row.retention_fraction = kNaN;
    row.discarded = true;
    row.reason = reason;
    return row;
}

RepRow row_from(std::size_t rep, std::size_t arm, const ScreenedSample& ss, const Scenario& sc) {
    try {
        const auto est = estimate(ss, sc.population_sign);
        RepRow row;
        row.rep_index = rep;
        row.arm = arm;
        row.beta_hat = est.beta_hat;
        row.pi_hat = est.pi_hat;
        row.se = est.se;
        row.retention_fraction = est.retention_fraction;
        row.sign_screen_pass = est.sign_screen_pass;
        if (sc.apply_sign_screen && !est.sign_screen_pass) {
            row.discarded = true;
            row.reason = DiscardReason::SignScreen;
        }
        return row;
    } catch (const Error& e) {
        return failed_row(rep, arm, reason_for(e.code()));
    }
}

void run_discrete_rep(const Scenario& sc, const DiscreteDgpConfig& cfg, std::size_t rep, RepRow* out) {
    const std::size_t arms = sc.mechanisms.size();
    Sample sample;
    try {
        sample = generate_discrete(cfg, derive_seed(sc.base_seed, static_cast<std::uint64_t>(Purpose::Replication), rep));
    } catch (const Error& e) {
        for (std::size_t a = 0; a < arms; ++a) out[a] = failed_row(rep, a, reason_for(e.code()));
        return;
    }
    for (std::size_t a = 0; a < arms; ++a) {
        try {
            out[a] = row_from(rep, a, apply_screen(sample, sc.mechanisms[a]), sc);
        } catch (const Error& e) {
            out[a] = failed_row(rep, a, reason_for(e.code()));
        }
    }
}

void run_gaussian_rep(const Scenario& sc, const GaussianDgpConfig& cfg, std::size_t rep, RepRow* out) {
    const Seed rep_seed = derive_seed(sc.base_seed, static_cast<std::uint64_t>(Purpose::Replication), rep);
    for (std::size_t a = 0; a < sc.r_values.size(); ++a) {
        try {
            auto sample =
                generate_gaussian(cfg, sc.r_values[a], derive_seed(rep_seed, static_cast<std::uint64_t>(Purpose::SampleDraw), a));
            auto ss = apply_screen(std::move(sample), ScreenMechanism::NoScreen);
            // The generator already realized the screen; report the design's r.
            ss.retention_fraction = sc.r_values[a];
            out[a] = row_from(rep, a, ss, sc);
        } catch (const Error& e) {
            out[a] = failed_row(rep, a, reason_for(e.code()));
        }
    }
}

}  // namespace

std::size_t Scenario::arm_count() const noexcept { return is_gaussian() ? r_values.size() : mechanisms.size(); }

std::string Scenario::arm_label(std::size_t arm) const {
    if (is_gaussian()) return "r=" + shortest(r_values.at(arm));
    return std::string(to_string(mechanisms.at(arm)));
}

void Scenario::validate() const {
    if (n_reps < 1) throw Error(ErrorCode::InvalidConfig, "n_reps must be at least 1");
    if (const auto* g = std::get_if<GaussianDgpConfig>(&dgp)) {
        g->validate();
        if (r_values.empty()) throw Error(ErrorCode::InvalidConfig, "Gaussian scenario needs at least one r value");
        for (double r : r_values)
            if (!(r > 0.0 && r <= 1.0))
                throw Error(ErrorCode::InvalidConfig, "r value " + shortest(r) + " is outside (0,1]");
    } else {
        std::get<DiscreteDgpConfig>(dgp).validate();
        if (mechanisms.empty()) throw Error(ErrorCode::InvalidConfig, "discrete scenario needs at least one mechanism");
    }
}

std::string_view to_string(DiscardReason r) {
    switch (r) {
        case DiscardReason::None: return "";
        case DiscardReason::SignScreen: return "sign_screen";
        case DiscardReason::WeakFirstStage: return "weak_first_stage";
        case DiscardReason::EmptyArm: return "empty_arm";
        case DiscardReason::EmptyScreen: return "empty_screen";
        case DiscardReason::GenerationFailed: return "generation_failed";
        case DiscardReason::Other: return "other";
    }
    return "other";
}

RepTable run_scenario(const Scenario& sc, const ParallelOptions& opts) {
    sc.validate();
    RepTable t;
    t.n_reps = sc.n_reps;
    const std::size_t arms = sc.arm_count();
    for (std::size_t a = 0; a < arms; ++a) t.arm_labels.push_back(sc.arm_label(a));
    t.rows.resize(sc.n_reps * arms);
    RepRow* rows = t.rows.data();
    if (const auto* g = std::get_if<GaussianDgpConfig>(&sc.dgp)) {
        for_each_index(sc.n_reps, opts, [&](std::size_t rep) { run_gaussian_rep(sc, *g, rep, rows + rep * arms); });
    } else {
        const auto& d = std::get<DiscreteDgpConfig>(sc.dgp);
        for_each_index(sc.n_reps, opts, [&](std::size_t rep) { run_discrete_rep(sc, d, rep, rows + rep * arms); });
    }
    return t;
}

const ArmSummary& McSummary::arm(std::string_view label) const {
    for (const auto& a : arms)
        if (a.label == label) return a;
    throw Error(ErrorCode::InvalidConfig, "no arm labelled '" + std::string(label) + "'");
}

McSummary summarize(const RepTable& t, double beta_target) {
    McSummary s;
    s.beta_target = beta_target;
    const std::size_t arms = t.arm_labels.size();
    for (std::size_t a = 0; a < arms; ++a) {
        std::vector<double> beta, abs_bias, se, pi, retention;
        std::size_t discarded = 0;
        for (std::size_t rep = 0; rep < t.n_reps; ++rep) {
            const auto& row = t.at(rep, a);
            if (row.discarded) {
                ++discarded;
                continue;
            }
            beta.push_back(row.beta_hat);
            abs_bias.push_back(std::abs(row.beta_hat - beta_target));
            se.push_back(row.se);
            pi.push_back(row.pi_hat);
            retention.push_back(row.retention_fraction);
        }
        if (beta.empty())
            throw Error(ErrorCode::AllDiscarded, "every replication of arm '" + t.arm_labels[a] + "' was discarded");

        ArmSummary arm;
        arm.label = t.arm_labels[a];
        arm.n_reps = t.n_reps;
        arm.n_kept = beta.size();
        const double m = static_cast<double>(arm.n_kept);
        arm.mean_beta = stats::mean(beta);
        arm.empirical_sd = stats::sd(beta);
        arm.mean_beta_mcse = arm.empirical_sd / std::sqrt(m);
        arm.empirical_sd_mcse = arm.n_kept > 1 ? arm.empirical_sd / std::sqrt(2.0 * (m - 1.0)) : 0.0;
        arm.mean_se = stats::mean(se);
        arm.mean_se_mcse = stats::sd(se) / std::sqrt(m);
        arm.mean_pi_hat = stats::mean(pi);
        arm.mean_retention = stats::mean(retention);
        std::sort(abs_bias.begin(), abs_bias.end());
        for (std::size_t k = 0; k < kAbsBiasProbs.size(); ++k) {
            arm.abs_bias_quantiles[k] = stats::quantile_sorted(abs_bias, kAbsBiasProbs[k]);
            arm.abs_bias_quantile_mcse[k] = stats::quantile_mcse_sorted(abs_bias, kAbsBiasProbs[k]);
        }
        arm.median_abs_bias = arm.abs_bias_quantiles[1];
        arm.median_abs_bias_mcse = arm.abs_bias_quantile_mcse[1];
        const double total = static_cast<double>(t.n_reps);
        arm.discard_rate = static_cast<double>(discarded) / total;
        arm.discard_rate_mcse = std::sqrt(arm.discard_rate * (1.0 - arm.discard_rate) / total);
        s.arms.push_back(std::move(arm));
    }
    return s;
}

std::string_view to_string(Diagnostic d) {
    return d == Diagnostic::RetentionTest ? "retention_test" : "tnr_test";
}

SizePowerResult size_power_run(const Scenario& sc, Diagnostic diagnostic, double alpha, int n_boot,
                               const ParallelOptions& opts) {
    sc.validate();
    const auto* cfg = std::get_if<DiscreteDgpConfig>(&sc.dgp);
    if (cfg == nullptr || !cfg->elicit_stated_types)
        throw Error(ErrorCode::MissingStatedTypes, "size/power runs need a discrete scenario with stated types");
    SizePowerResult res;
    res.n_reps = sc.n_reps;
    res.p_values.assign(sc.n_reps, kNaN);
    std::vector<std::uint8_t> rejected(sc.n_reps, 0);
    const ParallelOptions inner{Execution::Serial, 1};
    for_each_index(sc.n_reps, opts, [&](std::size_t rep) {
        try {
            const auto sample =
                generate_discrete(*cfg, derive_seed(sc.base_seed, static_cast<std::uint64_t>(Purpose::Replication), rep));
            const Seed test_seed = derive_seed(sc.base_seed, static_cast<std::uint64_t>(Purpose::TestDraw), rep);
            bool reject = false;
            double p = kNaN;
            if (diagnostic == Diagnostic::RetentionTest) {
                const auto r = retention_test(sample, alpha, n_boot, test_seed, inner);
                reject = r.rejected;
                p = r.p_value;
            } else {
                const auto r = tnr_test(sample, alpha, n_boot, test_seed, inner);
                reject = r.rejected;
                p = r.p_value;
            }
            res.p_values[rep] = p;
            rejected[rep] = reject ? 1 : 0;
        } catch (const Error&) {
            // Left as NaN: counted as a failed replication.
        }
    });
    for (std::size_t rep = 0; rep < sc.n_reps; ++rep) {
        if (std::isnan(res.p_values[rep])) continue;
        ++res.n_valid;
        res.rejections += rejected[rep];
    }
    if (res.n_valid == 0) throw Error(ErrorCode::AllDiscarded, "every size/power replication failed");
    const double v = static_cast<double>(res.n_valid);
    res.rejection_rate = static_cast<double>(res.rejections) / v;
    res.mcse = std::sqrt(res.rejection_rate * (1.0 - res.rejection_rate) / v);
    return res;
}

}  // namespace screenlab
