#include "screenlab/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace screenlab {

using nlohmann::json;

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const EstimateReport& r) {
    return json{{"beta_hat", r.beta_hat},
                {"pi_hat", r.pi_hat},
                {"se", r.se},
                {"n_used", r.n_used},
                {"retention_fraction", r.retention_fraction},
                {"sign_screen_pass", r.sign_screen_pass},
                {"sigma_u_hat", r.sigma_u_hat}};
}

json to_json(const RetentionEstimate& r) {
    return json{{"theta_hat", r.theta_hat},
                {"theta_display", r.theta_display},
                {"se_boot", r.se_boot},
                {"ci_upper_one_sided", r.ci_upper_one_sided},
                {"p_value", r.p_value},
                {"alpha", r.alpha},
                {"rejected", r.rejected},
                {"n_boot", r.n_boot}};
}

json to_json(const TnrEstimate& r) {
    return json{{"tnr_hat", r.tnr_hat},
                {"tnr_display", r.tnr_display},
                {"components",
                 {{"p_stated_noncomplier", r.components.p_stated_noncomplier},
                  {"p_complier", r.components.p_complier},
                  {"p_stated_noncomplier_given_complier", r.components.p_stated_noncomplier_given_complier}}},
                {"se_boot", r.se_boot},
                {"ci_upper_one_sided", r.ci_upper_one_sided},
                {"p_value", r.p_value},
                {"alpha", r.alpha},
                {"rejected", r.rejected},
                {"n_boot", r.n_boot}};
}

json to_json(const McSummary& s) {
    json arms = json::array();
    for (const auto& a : s.arms) {
        json q = json::object();
        for (std::size_t k = 0; k < kAbsBiasProbs.size(); ++k) {
            q[num(kAbsBiasProbs[k])] = {{"value", a.abs_bias_quantiles[k]}, {"mcse", a.abs_bias_quantile_mcse[k]}};
        }
        arms.push_back({{"label", a.label},
                        {"n_reps", a.n_reps},
                        {"n_kept", a.n_kept},
                        {"mean_beta", a.mean_beta},
                        {"mean_beta_mcse", a.mean_beta_mcse},
                        {"empirical_sd", a.empirical_sd},
                        {"empirical_sd_mcse", a.empirical_sd_mcse},
                        {"median_abs_bias", a.median_abs_bias},
                        {"median_abs_bias_mcse", a.median_abs_bias_mcse},
                        {"abs_bias_quantiles", q},
                        {"mean_se", a.mean_se},
                        {"mean_se_mcse", a.mean_se_mcse},
                        {"mean_pi_hat", a.mean_pi_hat},
                        {"mean_retention", a.mean_retention},
                        {"discard_rate", a.discard_rate},
                        {"discard_rate_mcse", a.discard_rate_mcse}});
    }
    json out{{"schema_version", kSchemaVersion}, {"beta_target", s.beta_target}, {"arms", arms}};
    if (s.diagnostic) {
        out["diagnostic"] = {{"test", *s.diagnostic},
                             {"rejection_rate", optional_json(s.rejection_rate)},
                             {"rejection_rate_mcse", optional_json(s.rejection_rate_mcse)}};
    }
    return out;
}

json to_json(const SizePowerResult& r) {
    return json{{"n_reps", r.n_reps},
                {"n_valid", r.n_valid},
                {"rejections", r.rejections},
                {"rejection_rate", r.rejection_rate},
                {"mcse", r.mcse}};
}

json to_json(const GainReport& g) {
    json rows = json::array();
    for (const auto& row : g.candidates) {
        rows.push_back({{"r", row.r},
                        {"se_ratio", row.se_ratio},
                        {"complier_retaining", row.complier_retaining},
                        {"se", optional_json(row.se)},
                        {"mde", optional_json(row.mde)}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"pi_hat", g.pi_hat},
                {"alpha", g.alpha},
                {"power", g.target_power},
                {"optimal_r", g.optimal_r},
                {"optimal_se_ratio", g.optimal_se_ratio},
                {"mde_reduction", g.mde_reduction},
                {"se_unscreened", optional_json(g.se_unscreened)},
                {"se_screened", optional_json(g.se_screened)},
                {"mde_unscreened", optional_json(g.mde_unscreened)},
                {"mde_screened", optional_json(g.mde_screened)},
                {"candidates", rows}};
}

json to_json(const Scenario& sc) {
    json dgp;
    if (const auto* g = std::get_if<GaussianDgpConfig>(&sc.dgp)) {
        dgp = {{"kind", "gaussian"}, {"n", g->n},     {"q", g->q},           {"alpha", g->alpha},
               {"beta", g->beta},    {"phi", g->phi}, {"pi", g->pi},         {"sigma_u", g->sigma_u},
               {"sigma_eta", g->sigma_eta}};
    } else {
        const auto& d = std::get<DiscreteDgpConfig>(sc.dgp);
        dgp = {{"kind", "discrete"},
               {"n", d.n},
               {"p_complier", d.p_complier},
               {"p_always", d.p_always},
               {"p_never", d.p_never},
               {"q", d.q},
               {"alpha", d.alpha},
               {"beta_complier", d.beta_complier},
               {"beta_always", d.beta_always},
               {"sigma_u", d.sigma_u},
               {"eps1", d.eps1},
               {"eps2", d.eps2},
               {"elicit_stated_types", d.elicit_stated_types}};
    }
    json arms = json::array();
    for (std::size_t a = 0; a < sc.arm_count(); ++a) arms.push_back(sc.arm_label(a));
    return json{{"dgp", dgp},
                {"arms", arms},
                {"population_sign", sc.population_sign == Sign::Positive ? "+" : "-"},
                {"sign_screen", sc.apply_sign_screen},
                {"n_reps", sc.n_reps},
                {"seed", sc.base_seed}};
}

void write_rep_table_csv(std::ostream& out, const RepTable& t) {
    out << "rep_index,mechanism,beta_hat,pi_hat,se,retention_fraction,sign_screen_pass,discarded,reason\n";
    for (const auto& row : t.rows) {
        out << row.rep_index << ',' << t.arm_labels[row.arm] << ',' << num(row.beta_hat) << ',' << num(row.pi_hat)
            << ',' << num(row.se) << ',' << num(row.retention_fraction) << ',' << (row.sign_screen_pass ? 1 : 0)
            << ',' << (row.discarded ? 1 : 0) << ',' << to_string(row.reason) << '\n';
    }
}

json rep_table_json(const RepTable& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        rows.push_back({{"rep_index", row.rep_index},
                        {"mechanism", t.arm_labels[row.arm]},
                        {"beta_hat", row.beta_hat},
                        {"pi_hat", row.pi_hat},
                        {"se", row.se},
                        {"retention_fraction", row.retention_fraction},
                        {"sign_screen_pass", row.sign_screen_pass},
                        {"discarded", row.discarded},
                        {"reason", to_string(row.reason)}});
    }
    return json{{"schema_version", kSchemaVersion}, {"n_reps", t.n_reps}, {"arms", t.arm_labels}, {"rows", rows}};
}

}  // namespace screenlab
