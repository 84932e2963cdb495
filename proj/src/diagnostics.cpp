#include "screenlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "screenlab/errors.hpp"
#include "screenlab/estimators.hpp"
#include "screenlab/stats.hpp"

namespace screenlab {

namespace {

void require_binary_takeup(const Sample& s) {
    for (std::size_t i = 0; i < s.units.size(); ++i) {
        const double d = s.units[i].d;
        if (d != 0.0 && d != 1.0)
            throw Error(ErrorCode::SchemaError, "diagnostics need binary take-up; unit " + std::to_string(i) +
                                                    " has d = " + std::to_string(d));
    }
}

void require_stated(const Sample& s) {
    if (!s.has_stated_types()) throw Error(ErrorCode::MissingStatedTypes, "sample has no stated types");
}

void check_test_args(double alpha, int n_boot) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0, 0.5)");
    if (n_boot < 200) throw Error(ErrorCode::InvalidConfig, "n_boot must be at least 200");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

struct BootOutcome {
    double se = 0.0;
    double ci_upper = 0.0;
    double p_value = 1.0;
};

// Percentile bootstrap test of H0: value = 1 against value < 1. The p-value
// is the share of replicates consistent with the null (replicate >= 1), so
// the test rejects exactly when the one-sided upper percentile bound falls
// below 1.
BootOutcome boundary_test(const Sample& s, CountStatistic stat, double alpha, int n_boot, Seed seed,
                          const ParallelOptions& opts) {
    const auto codes = stratified_codes(s);
    auto reps = bootstrap_replicates(codes, stat, n_boot, seed, opts);
    for (double v : reps)
        if (!std::isfinite(v))
            throw Error(ErrorCode::DegenerateBootstrap, "a bootstrap replicate has a vanishing first stage");
    BootOutcome out;
    out.se = stats::sd(reps);
    const auto consistent = std::count_if(reps.begin(), reps.end(), [](double v) { return v >= 1.0; });
    out.p_value = (1.0 + static_cast<double>(consistent)) / (static_cast<double>(n_boot) + 1.0);
    out.ci_upper = stats::quantile(std::move(reps), 1.0 - alpha);
    return out;
}

}  // namespace

double complier_mean(const Sample& s, std::span<const double> x) {
    if (x.size() != s.units.size()) throw Error(ErrorCode::SchemaError, "attribute length differs from sample size");
    std::size_t n1 = 0, n0 = 0;
    double xd1 = 0.0, xd0 = 0.0, d1 = 0.0, d0 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& u = s.units[i];
        if (u.z == 1) {
            ++n1;
            xd1 += x[i] * u.d;
            d1 += u.d;
        } else {
            ++n0;
            xd0 += x[i] * u.d;
            d0 += u.d;
        }
    }
    if (n1 == 0 || n0 == 0) throw Error(ErrorCode::EmptyArm, "an instrument arm is empty");
    const double fs = d1 / static_cast<double>(n1) - d0 / static_cast<double>(n0);
    if (!(std::abs(fs) >= kWeakFirstStage))
        throw Error(ErrorCode::WeakFirstStage, "first stage is numerically zero");
    return (xd1 / static_cast<double>(n1) - xd0 / static_cast<double>(n0)) / fs;
}

double retention_estimate(const Sample& s) {
    require_stated(s);
    require_binary_takeup(s);
    std::vector<double> stated(s.units.size());
    std::transform(s.units.begin(), s.units.end(), stated.begin(),
                   [](const Unit& u) { return *u.stated_complier ? 1.0 : 0.0; });
    return complier_mean(s, stated);
}

double tnr_formula(const TnrComponents& c) {
    return (c.p_stated_noncomplier - c.p_complier * c.p_stated_noncomplier_given_complier) / (1.0 - c.p_complier);
}

TnrEstimate tnr_estimate(const Sample& s) {
    const double theta = retention_estimate(s);
    TnrEstimate e;
    std::size_t stated_no = 0;
    for (const auto& u : s.units) stated_no += *u.stated_complier ? 0 : 1;
    e.components.p_stated_noncomplier = static_cast<double>(stated_no) / static_cast<double>(s.units.size());
    e.components.p_complier = first_stage(apply_screen(s, ScreenMechanism::NoScreen));
    e.components.p_stated_noncomplier_given_complier = 1.0 - theta;
    if (e.components.p_complier >= 1.0 - 1e-9)
        throw Error(ErrorCode::AllCompliers, "estimated complier share is 1; the true-negative rate is undefined");
    e.tnr_hat = tnr_formula(e.components);
    e.tnr_display = clamp01(e.tnr_hat);
    return e;
}

RetentionEstimate retention_test(const Sample& s, double alpha, int n_boot, Seed seed, const ParallelOptions& opts) {
    check_test_args(alpha, n_boot);
    RetentionEstimate r;
    r.theta_hat = retention_estimate(s);
    r.theta_display = clamp01(r.theta_hat);
    const auto b = boundary_test(s, retention_from_counts, alpha, n_boot, seed, opts);
    r.se_boot = b.se;
    r.ci_upper_one_sided = b.ci_upper;
    r.p_value = b.p_value;
    r.alpha = alpha;
    r.rejected = r.p_value < alpha;
    r.n_boot = n_boot;
    return r;
}

TnrEstimate tnr_test(const Sample& s, double alpha, int n_boot, Seed seed, const ParallelOptions& opts) {
    check_test_args(alpha, n_boot);
    TnrEstimate e = tnr_estimate(s);
    const auto b = boundary_test(s, tnr_from_counts, alpha, n_boot, seed, opts);
    e.se_boot = b.se;
    e.ci_upper_one_sided = b.ci_upper;
    e.p_value = b.p_value;
    e.alpha = alpha;
    e.rejected = e.p_value < alpha;
    e.n_boot = n_boot;
    return e;
}

std::string_view to_string(Recommendation r) {
    return r == Recommendation::Screened ? "screened" : "unscreened";
}

Recommendation recommend(const RetentionEstimate& retention) noexcept {
    return retention.rejected ? Recommendation::Unscreened : Recommendation::Screened;
}

StratifiedCodes stratified_codes(const Sample& s) {
    require_stated(s);
    require_binary_takeup(s);
    StratifiedCodes codes;
    for (const auto& u : s.units) {
        std::uint8_t code = 0;
        if (u.d == 1.0) code |= kTakeUpBit;
        if (*u.stated_complier) code |= kStatedBit;
        (u.z == 1 ? codes.arm1 : codes.arm0).push_back(code);
    }
    if (codes.arm0.empty() || codes.arm1.empty())
        throw Error(ErrorCode::DegenerateBootstrap, "an instrument arm is empty");
    return codes;
}

namespace {

struct CountMoments {
    double takeup1, takeup0, stated_takeup1, stated_takeup0, stated_no_share;
};

CountMoments moments(const CellCounts& c) {
    const auto& a0 = c.cells[0];
    const auto& a1 = c.cells[1];
    const double n0 = static_cast<double>(c.arm_total(0));
    const double n1 = static_cast<double>(c.arm_total(1));
    constexpr std::size_t t = kTakeUpBit, st = kTakeUpBit | kStatedBit, none = 0;
    CountMoments m;
    m.takeup1 = static_cast<double>(a1[t] + a1[st]) / n1;
    m.takeup0 = static_cast<double>(a0[t] + a0[st]) / n0;
    m.stated_takeup1 = static_cast<double>(a1[st]) / n1;
    m.stated_takeup0 = static_cast<double>(a0[st]) / n0;
    m.stated_no_share = static_cast<double>(a0[none] + a0[t] + a1[none] + a1[t]) / (n0 + n1);
    return m;
}

}  // namespace

double retention_from_counts(const CellCounts& c) {
    const auto m = moments(c);
    return (m.stated_takeup1 - m.stated_takeup0) / (m.takeup1 - m.takeup0);
}

double tnr_from_counts(const CellCounts& c) {
    const auto m = moments(c);
    const double p_complier = m.takeup1 - m.takeup0;
    const double theta = (m.stated_takeup1 - m.stated_takeup0) / p_complier;
    return tnr_formula({m.stated_no_share, p_complier, 1.0 - theta});
}

}  // namespace screenlab
