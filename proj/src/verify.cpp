#include "screenlab/verify.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "screenlab/config.hpp"
#include "screenlab/diagnostics.hpp"
#include "screenlab/montecarlo.hpp"
#include "screenlab/power.hpp"
#include "screenlab/simulate.hpp"
#include "screenlab/stats.hpp"

namespace screenlab {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[192];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

DiscreteDgpConfig reference_population() {
    DiscreteDgpConfig cfg;
    cfg.p_complier = 0.25;
    cfg.p_always = 0.35;
    cfg.p_never = 0.40;
    cfg.q = 0.5;
    cfg.alpha = 0.0;
    cfg.beta_complier = 2.0;
    cfg.beta_always = 2.0;
    cfg.sigma_u = 1.0;
    return cfg;
}

// Sub-seeds so that criteria sharing the root seed do not share draws.
Seed criterion_seed(Seed root, int id) { return derive_seed(root, 0xC0FFEEu, static_cast<std::uint64_t>(id)); }

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_report(const EstimateReport& a, const EstimateReport& b) {
    return same_bits(a.beta_hat, b.beta_hat) && same_bits(a.pi_hat, b.pi_hat) && same_bits(a.se, b.se) &&
           same_bits(a.sigma_u_hat, b.sigma_u_hat) && same_bits(a.retention_fraction, b.retention_fraction) &&
           a.n_used == b.n_used && a.sign_screen_pass == b.sign_screen_pass;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

std::optional<Suite> parse_suite(std::string_view name) {
    if (name == "lemma1") return Suite::Lemma1;
    if (name == "prop1") return Suite::Prop1;
    if (name == "prop2") return Suite::Prop2;
    if (name == "diagnostics") return Suite::Diagnostics;
    if (name == "all") return Suite::All;
    return std::nullopt;
}

std::vector<CriterionResult> check_se_ratio_and_analytic_se(Seed seed, const ParallelOptions& opts) {
    const auto t0 = Clock::now();
    Scenario sc;
    auto cfg = reference_population();
    cfg.n = 10000;
    sc.dgp = cfg;
    sc.mechanisms = {ScreenMechanism::NoScreen, ScreenMechanism::OracleComplier};
    sc.n_reps = 2000;
    sc.base_seed = criterion_seed(seed, 1);
    const auto summary = summarize(run_scenario(sc, opts), cfg.beta_complier);
    const auto& none = summary.arm("none");
    const auto& oracle = summary.arm("oracle");
    const double elapsed = seconds_since(t0);

    CriterionResult c1;
    c1.id = 1;
    c1.name = "sd(oracle-screened) / sd(unscreened) equals sqrt(complier share)";
    const double ratio = oracle.empirical_sd / none.empirical_sd;
    c1.observed = fmt("%.4f (sd %.5f / %.5f)", ratio, oracle.empirical_sd, none.empirical_sd);
    c1.expected = "in [0.45, 0.55], target sqrt(0.25) = 0.5";
    c1.pass = ratio >= 0.45 && ratio <= 0.55;
    c1.seconds = elapsed;

    CriterionResult c2;
    c2.id = 2;
    c2.name = "analytic se vs empirical sd and closed form";
    const double closed_form = design_se(0.25, 10000, 1.0, 0.5);
    const double rel_emp = std::abs(none.mean_se - none.empirical_sd) / none.empirical_sd;
    const double rel_cf = std::abs(none.mean_se - closed_form) / closed_form;
    c2.observed = fmt("mean se %.5f, rel. err vs empirical sd %.4f, vs closed form %.4f", none.mean_se, rel_emp, rel_cf);
    c2.expected = fmt("both <= 0.05; closed form sqrt(1/(10000*0.0625*0.25)) = %.5f", closed_form);
    c2.pass = rel_emp <= 0.05 && rel_cf <= 0.05;
    c2.seconds = 0.0;
    return {c1, c2};
}

CriterionResult check_late_invariance(Seed seed, const ParallelOptions& opts) {
    const auto t0 = Clock::now();
    Scenario sc;
    auto cfg = reference_population();
    cfg.n = 100000;
    cfg.beta_always = 5.0;
    sc.dgp = cfg;
    sc.mechanisms = {ScreenMechanism::NoScreen, ScreenMechanism::OracleComplier};
    sc.n_reps = 200;
    sc.base_seed = criterion_seed(seed, 3);
    const auto table = run_scenario(sc, opts);
    const auto summary = summarize(table, cfg.beta_complier);
    const auto& none = summary.arm("none");
    const auto& oracle = summary.arm("oracle");

    std::vector<double> diff;
    for (std::size_t rep = 0; rep < table.n_reps; ++rep) {
        const auto& a = table.at(rep, 0);
        const auto& b = table.at(rep, 1);
        if (!a.discarded && !b.discarded) diff.push_back(a.beta_hat - b.beta_hat);
    }
    const double diff_mean = none.mean_beta - oracle.mean_beta;
    const double diff_mcse = stats::sd(diff) / std::sqrt(static_cast<double>(diff.size()));

    const double z_none = std::abs(none.mean_beta - 2.0) / none.mean_beta_mcse;
    const double z_oracle = std::abs(oracle.mean_beta - 2.0) / oracle.mean_beta_mcse;
    const double z_diff = std::abs(diff_mean) / diff_mcse;

    CriterionResult c;
    c.id = 3;
    c.name = "screened and unscreened both target the complier effect";
    c.observed = fmt("mean beta none %.5f, oracle %.5f", none.mean_beta, oracle.mean_beta) +
                 fmt("; |z| vs 2.0: %.2f, %.2f; |z| of difference %.2f", z_none, z_oracle, z_diff);
    c.expected = "each |z| < 3 (beta_complier = 2, beta_always = 5)";
    c.pass = z_none < 3.0 && z_oracle < 3.0 && z_diff < 3.0;
    c.seconds = seconds_since(t0);
    return c;
}

CriterionResult check_median_bias_ordering(Seed seed, const ParallelOptions& opts) {
    const auto t0 = Clock::now();
    GaussianDgpConfig g;
    g.n = 40;
    g.q = 0.5;
    g.alpha = 0.0;
    g.beta = 1.0;
    g.phi = 0.0;
    g.sigma_u = 1.0;
    g.sigma_eta = 1.0;
    // mu / sd(M_eta,1) = 2 with mu = pi*n*q(1-q) and sd = sigma_eta*sqrt(n*q(1-q)).
    const double nq = static_cast<double>(g.n) * g.q * (1.0 - g.q);
    g.pi = 2.0 * g.sigma_eta * std::sqrt(nq) / nq;

    Scenario sc;
    sc.dgp = g;
    sc.r_values = {0.25, 0.5, 0.75, 1.0};
    sc.apply_sign_screen = true;
    sc.n_reps = 20000;
    sc.base_seed = criterion_seed(seed, 4);
    const auto summary = summarize(run_scenario(sc, opts), g.beta);

    bool weak_ok = true;
    double worst_z = -1e300;
    for (std::size_t k = 0; k + 1 < summary.arms.size(); ++k) {
        const auto& lo = summary.arms[k];
        const auto& hi = summary.arms[k + 1];
        for (std::size_t j = 0; j < kAbsBiasProbs.size(); ++j) {
            const double se = std::hypot(lo.abs_bias_quantile_mcse[j], hi.abs_bias_quantile_mcse[j]);
            const double z = (lo.abs_bias_quantiles[j] - hi.abs_bias_quantiles[j]) / se;
            worst_z = std::max(worst_z, z);
            if (z > 3.0) weak_ok = false;
        }
    }
    const auto& first = summary.arms.front();
    const auto& last = summary.arms.back();
    const double strict_z = (last.median_abs_bias - first.median_abs_bias) /
                            std::hypot(last.median_abs_bias_mcse, first.median_abs_bias_mcse);

    CriterionResult c;
    c.id = 4;
    c.name = "|bias| quantiles increase with r under sign screening";
    std::string medians;
    for (const auto& a : summary.arms) medians += a.label + fmt(" %.4f ", a.median_abs_bias);
    c.observed = "median |bias|: " + medians + fmt("; strict gap z %.2f; worst reversal z %.2f", strict_z, worst_z);
    c.expected = "no quantile reversal beyond 3 mcse; median(r=1) - median(r=0.25) > 3 mcse";
    c.pass = weak_ok && strict_z > 3.0;
    c.seconds = seconds_since(t0);
    return c;
}

CriterionResult check_retention_consistency(Seed seed, const ParallelOptions& opts) {
    const auto t0 = Clock::now();
    auto cfg = reference_population();
    cfg.n = 100000;
    cfg.eps2 = 0.2;
    constexpr std::size_t kSeeds = 50;
    std::vector<double> theta(kSeeds);
    const Seed root = criterion_seed(seed, 5);
    for_each_index(kSeeds, opts, [&](std::size_t k) {
        theta[k] = retention_estimate(generate_discrete(cfg, derive_seed(root, 0, k)));
    });
    const double m = stats::mean(theta);
    CriterionResult c;
    c.id = 5;
    c.name = "diagnostics: retention estimator consistency (eps2 = 0.2)";
    c.observed = fmt("mean theta_hat %.5f over 50 seeds (sd %.5f)", m, stats::sd(theta));
    c.expected = "within 0.02 of 0.8";
    c.pass = std::abs(m - 0.8) <= 0.02;
    c.seconds = seconds_since(t0);
    return c;
}

std::vector<CriterionResult> check_retention_size_power(Seed seed, const ParallelOptions& opts) {
    auto run = [&](DiscreteDgpConfig cfg, Seed root) {
        Scenario sc;
        cfg.n = 2000;
        sc.n_reps = 500;
        cfg.eps2 = 0.0;
        sc.dgp = cfg;
        sc.base_seed = derive_seed(root, 0, 0);
        const auto size = size_power_run(sc, Diagnostic::RetentionTest, 0.05, kDefaultBootstrapReps, opts);
        cfg.eps2 = 0.2;
        sc.dgp = cfg;
        sc.base_seed = derive_seed(root, 0, 1);
        const auto power = size_power_run(sc, Diagnostic::RetentionTest, 0.05, kDefaultBootstrapReps, opts);
        return std::pair{size, power};
    };
    auto describe = [](const SizePowerResult& size, const SizePowerResult& power) {
        return fmt("size %.4f (mcse %.4f), ", size.rejection_rate, size.mcse) +
               fmt("power %.4f (mcse %.4f)", power.rejection_rate, power.mcse) +
               fmt(", valid reps %.0f/%.0f", static_cast<double>(size.n_valid + power.n_valid), 1000.0);
    };

    auto t0 = Clock::now();
    DiscreteDgpConfig one_sided = reference_population();
    one_sided.p_always = 0.0;
    one_sided.p_never = 0.75;
    const auto [size, power] = run(one_sided, criterion_seed(seed, 6));
    CriterionResult c;
    c.id = 6;
    c.name = "diagnostics: retention test size (eps2 = 0) and power (eps2 = 0.2), one-sided noncompliance";
    c.observed = describe(size, power);
    c.expected = "size <= 0.08, power >= 0.8 (n = 2000, alpha = 0.05, 500 reps)";
    c.pass = size.rejection_rate <= 0.08 && power.rejection_rate >= 0.8;
    c.seconds = seconds_since(t0);

    t0 = Clock::now();
    const auto [size2, power2] = run(reference_population(), criterion_seed(seed, 60));
    CriterionResult info;
    info.id = 6;
    info.informational = true;
    info.name = "diagnostics: same test with 35% always-takers (two-sided noncompliance)";
    info.observed = describe(size2, power2);
    info.expected = "reported only";
    info.pass = size2.rejection_rate <= 0.08 && power2.rejection_rate >= 0.8;
    info.seconds = seconds_since(t0);
    return {c, info};
}

CriterionResult check_tnr_recovery(Seed seed, const ParallelOptions& opts) {
    const auto t0 = Clock::now();
    auto cfg = reference_population();
    cfg.n = 100000;
    cfg.eps1 = 0.1;
    cfg.eps2 = 0.0;
    constexpr std::size_t kSeeds = 50;
    std::vector<double> tnr(kSeeds);
    const Seed root = criterion_seed(seed, 7);
    for_each_index(kSeeds, opts, [&](std::size_t k) {
        tnr[k] = tnr_estimate(generate_discrete(cfg, derive_seed(root, 0, k))).tnr_hat;
    });
    const double m = stats::mean(tnr);
    CriterionResult c;
    c.id = 7;
    c.name = "diagnostics: true-negative-rate recovery (eps1 = 0.1)";
    c.observed = fmt("mean tnr_hat %.5f over 50 seeds (sd %.5f)", m, stats::sd(tnr));
    c.expected = "within 0.02 of 0.9";
    c.pass = std::abs(m - 0.9) <= 0.02;
    c.seconds = seconds_since(t0);
    return c;
}

CriterionResult check_pseudo_screen_noop(Seed seed) {
    const auto t0 = Clock::now();
    const Seed root = criterion_seed(seed, 8);
    std::size_t checked = 0, identical = 0;
    for (std::size_t k = 0; k < 20; ++k) {
        auto cfg = reference_population();
        cfg.n = 500 + 250 * k;
        cfg.eps1 = 0.05 * static_cast<double>(k % 5);
        cfg.eps2 = 0.03 * static_cast<double>(k % 4);
        cfg.beta_always = 1.0 + static_cast<double>(k);
        const auto sample = generate_discrete(cfg, derive_seed(root, 0, k));
        const auto with_stated = estimate(apply_screen(sample, ScreenMechanism::NoScreen), Sign::Positive);
        const auto stripped = estimate(apply_screen(without_stated_types(sample), ScreenMechanism::NoScreen), Sign::Positive);
        const auto pseudo = estimate(apply_screen(sample, ScreenMechanism::PseudoScreen), Sign::Positive);
        ++checked;
        if (same_report(with_stated, stripped) && same_report(with_stated, pseudo)) ++identical;
    }
    CriterionResult c;
    c.id = 8;
    c.name = "pseudo-screen leaves the unscreened estimate bitwise unchanged";
    c.observed = fmt("%.0f of %.0f samples bitwise identical", static_cast<double>(identical), static_cast<double>(checked));
    c.expected = "all identical (stated present / absent / pseudo-screened)";
    c.pass = identical == checked;
    c.seconds = seconds_since(t0);
    return c;
}

CriterionResult check_simulate_determinism(Seed seed, const std::string& scratch_dir) {
    namespace fs = std::filesystem;
    const auto t0 = Clock::now();
    std::ostringstream text;
    text << "[dgp]\nkind = discrete\nn = 2000\np_complier = 0.25\np_always = 0.35\np_never = 0.40\n"
         << "eps1 = 0.1\neps2 = 0.1\n[scenario]\nmechanisms = none, oracle, stated, pseudo\nn_reps = 60\n"
         << "seed = " << criterion_seed(seed, 9) << "\n[diagnostics]\ntest = retention\nn_boot = 200\n";
    const auto rc = build_run_config(parse_config_text(text.str()));
    const fs::path base(scratch_dir);
    const auto a = write_simulation(simulate(rc, {Execution::Parallel, 1}), rc, (base / "threads1").string());
    const auto b = write_simulation(simulate(rc, {Execution::Parallel, 4}), rc, (base / "threads4").string());
    const bool table_same = slurp(a.table_path) == slurp(b.table_path);
    const bool summary_same = slurp(a.summary_path) == slurp(b.summary_path);
    CriterionResult c;
    c.id = 9;
    c.name = "simulate output is byte-identical across worker counts";
    c.observed = std::string("reps.csv ") + (table_same ? "identical" : "DIFFERS") + ", summary.json " +
                 (summary_same ? "identical" : "DIFFERS") + " (1 vs 4 threads)";
    c.expected = "both identical";
    c.pass = table_same && summary_same && !slurp(a.table_path).empty();
    c.seconds = seconds_since(t0);
    return c;
}

std::vector<CriterionResult> run_suite(Suite suite, Seed seed, const ParallelOptions& opts,
                                       const std::string& scratch_dir) {
    std::vector<CriterionResult> out;
    const bool all = suite == Suite::All;
    if (all || suite == Suite::Prop1)
        for (auto& r : check_se_ratio_and_analytic_se(seed, opts)) out.push_back(std::move(r));
    if (all || suite == Suite::Lemma1) out.push_back(check_late_invariance(seed, opts));
    if (all || suite == Suite::Prop2) out.push_back(check_median_bias_ordering(seed, opts));
    if (all || suite == Suite::Diagnostics) {
        out.push_back(check_retention_consistency(seed, opts));
        for (auto& r : check_retention_size_power(seed, opts)) out.push_back(std::move(r));
        out.push_back(check_tnr_recovery(seed, opts));
    }
    if (all) {
        out.push_back(check_pseudo_screen_noop(seed));
        out.push_back(check_simulate_determinism(seed, scratch_dir));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    char head[64];
    const char* tag = r.informational ? "INFO" : r.pass ? "PASS" : "FAIL";
    std::snprintf(head, sizeof head, "[%s] C%d ", tag, r.id);
    char tail[48];
    std::snprintf(tail, sizeof tail, " (%.1fs)", r.seconds);
    return std::string(head) + r.name + "\n       observed: " + r.observed + "\n       expected: " + r.expected + tail;
}

}  // namespace screenlab
