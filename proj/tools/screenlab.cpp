// screenlab command-line front end.
//
// Exit status: 0 success, 1 verification failure, 2 usage or input error,
// 3 runtime failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "screenlab/config.hpp"
#include "screenlab/dataset.hpp"
#include "screenlab/diagnostics.hpp"
#include "screenlab/errors.hpp"
#include "screenlab/estimators.hpp"
#include "screenlab/power.hpp"
#include "screenlab/report.hpp"
#include "screenlab/simulate.hpp"
#include "screenlab/verify.hpp"

namespace {

using namespace screenlab;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

constexpr Seed kDefaultAnalyzeSeed = 1;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig:
        case ErrorCode::SchemaError:
        case ErrorCode::InvalidRetention:
        case ErrorCode::MissingTypes:
        case ErrorCode::MissingStatedTypes:
            return kExitUsage;
        default:
            return kExitRuntime;
    }
}

// --seed wins, then SCREENLAB_SEED, then the fallback.
std::optional<Seed> resolve_seed(const std::string& flag, std::optional<Seed> fallback) {
    if (!flag.empty()) return parse_seed(flag, "--seed");
    if (const char* env = std::getenv("SCREENLAB_SEED"); env && *env) return parse_seed(env, "SCREENLAB_SEED");
    return fallback;
}

ParallelOptions parallel(int threads) {
    ParallelOptions opts;
    if (threads < 0) throw Error(ErrorCode::InvalidConfig, "--threads must be non-negative");
    opts.threads = threads;
    return opts;
}

void write_text(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + path + "'");
    out << text;
}

Sign parse_sign(const std::string& s) {
    if (s == "positive") return Sign::Positive;
    if (s == "negative") return Sign::Negative;
    throw Error(ErrorCode::InvalidConfig, "--population-sign must be positive or negative");
}

struct SimulateArgs {
    std::string config;
    std::string seed;
    std::optional<std::size_t> reps;
    std::string out;
    std::string format;
    int threads = 0;
};

int cmd_simulate(const SimulateArgs& a) {
    RunConfig rc = load_run_config(a.config);
    if (auto s = resolve_seed(a.seed, std::nullopt)) rc.scenario.base_seed = *s;
    if (a.reps) {
        if (*a.reps == 0) throw Error(ErrorCode::InvalidConfig, "--reps must be positive");
        rc.scenario.n_reps = *a.reps;
    }
    if (!a.out.empty()) rc.out_dir = a.out;
    if (!a.format.empty()) rc.format = a.format == "json" ? TableFormat::Json : TableFormat::Csv;
    rc.scenario.validate();

    const auto result = simulate(rc, parallel(a.threads));
    const auto files = write_simulation(result, rc, rc.out_dir);
    std::cout << summary_text(result);
    std::cout << "wrote " << files.table_path << " and " << files.summary_path << '\n';
    return kExitOk;
}

struct AnalyzeArgs {
    std::string dataset;
    double alpha = kDefaultAlpha;
    int n_boot = kDefaultBootstrapReps;
    std::string seed;
    std::string out;
    std::string sign = "positive";
    int threads = 0;
};

int cmd_analyze(const AnalyzeArgs& a) {
    const Sample sample = read_dataset_file(a.dataset);
    const Sign sign = parse_sign(a.sign);
    const Seed seed = *resolve_seed(a.seed, kDefaultAnalyzeSeed);
    const auto opts = parallel(a.threads);

    json doc{{"schema_version", kSchemaVersion}, {"dataset", a.dataset}, {"n", sample.size()}};
    doc["unscreened"] = to_json(estimate(apply_screen(sample, ScreenMechanism::NoScreen), sign));

    if (!sample.has_stated_types()) {
        std::cerr << "notice: dataset has no stated_complier column; screening diagnostics skipped\n";
        doc["screened"] = nullptr;
        doc["retention_test"] = nullptr;
        doc["tnr_test"] = nullptr;
        doc["recommendation"] = nullptr;
        doc["notes"] = json::array({"stated_complier missing: estimates only"});
    } else {
        doc["screened"] = to_json(estimate(apply_screen(sample, ScreenMechanism::StatedComplier), sign));
        const auto retention = retention_test(
            sample, a.alpha, a.n_boot, derive_seed(seed, static_cast<std::uint64_t>(Purpose::TestDraw), 0), opts);
        doc["retention_test"] = to_json(retention);
        try {
            doc["tnr_test"] = to_json(tnr_test(sample, a.alpha, a.n_boot,
                                               derive_seed(seed, static_cast<std::uint64_t>(Purpose::TestDraw), 1), opts));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::AllCompliers && e.code() != ErrorCode::DegenerateBootstrap) throw;
            std::cerr << "notice: true-negative-rate test not computable: " << e.what() << '\n';
            doc["tnr_test"] = nullptr;
            doc["notes"] = json::array({std::string("tnr_test skipped: ") + e.what()});
        }
        doc["recommendation"] = std::string(to_string(recommend(retention)));
        doc["seed"] = seed;
    }

    const std::string text = doc.dump(2) + "\n";
    if (!a.out.empty()) write_text(a.out, text);
    std::cout << text;
    return kExitOk;
}

struct PowerArgs {
    std::string config;
    std::optional<double> pi_hat;
    double alpha = 0.05;
    double power = 0.8;
    std::vector<double> r;
    std::optional<double> se;
    std::optional<std::size_t> n;
    double sigma_u = 1.0;
    double q = 0.5;
    std::string json_out;
    // Which flags were given, so a config file only fills the rest.
    bool alpha_set = false, power_set = false, sigma_u_set = false, q_set = false;
};

std::string fmt_opt(const std::optional<double>& v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
}

int cmd_power(const PowerArgs& a) {
    PowerSpec spec;
    std::optional<double> pi_hat = a.pi_hat;
    if (!a.config.empty()) {
        spec = load_run_config(a.config).power;
        if (!pi_hat && spec.se_inputs) pi_hat = spec.se_inputs->pi_hat;
    }
    if (!pi_hat) throw Error(ErrorCode::InvalidConfig, "--pi-hat is required (or pi_hat in the config's [power])");
    if (a.alpha_set || a.config.empty()) spec.alpha = a.alpha;
    if (a.power_set || a.config.empty()) spec.target_power = a.power;
    if (!a.r.empty()) spec.r_candidates = a.r;
    if (a.se) {
        spec.se_unscreened = a.se;
        spec.se_inputs.reset();
    }
    if (a.n) {
        SeInputs in = spec.se_inputs.value_or(SeInputs{});
        in.n = *a.n;
        spec.se_inputs = in;
        spec.se_unscreened.reset();
    }
    if (spec.se_inputs) {
        spec.se_inputs->pi_hat = *pi_hat;
        if (a.sigma_u_set) spec.se_inputs->sigma_u = a.sigma_u;
        if (a.q_set) spec.se_inputs->q = a.q;
    }
    const auto g = gain_report(*pi_hat, spec);

    std::printf("pi_hat %.6f  optimal r %.6f  se ratio %.6f  mde reduction %.4f\n", g.pi_hat, g.optimal_r,
                g.optimal_se_ratio, g.mde_reduction);
    std::printf("se unscreened %s  screened %s  mde unscreened %s  screened %s\n", fmt_opt(g.se_unscreened).c_str(),
                fmt_opt(g.se_screened).c_str(), fmt_opt(g.mde_unscreened).c_str(), fmt_opt(g.mde_screened).c_str());
    if (!g.candidates.empty()) {
        std::printf("%10s %10s %10s %12s %12s\n", "r", "se_ratio", "retaining", "se", "mde");
        for (const auto& row : g.candidates)
            std::printf("%10.4f %10.6f %10s %12s %12s\n", row.r, row.se_ratio, row.complier_retaining ? "yes" : "no",
                        fmt_opt(row.se).c_str(), fmt_opt(row.mde).c_str());
    }
    const std::string text = to_json(g).dump(2) + "\n";
    if (!a.json_out.empty()) write_text(a.json_out, text);
    std::cout << text;
    return kExitOk;
}

struct VerifyArgs {
    std::string suite = "all";
    std::string seed;
    int threads = 0;
    std::string scratch;
};

int cmd_verify(const VerifyArgs& a) {
    const auto suite = parse_suite(a.suite);
    if (!suite) throw Error(ErrorCode::InvalidConfig, "unknown suite '" + a.suite + "'");
    const Seed seed = *resolve_seed(a.seed, kDefaultVerifySeed);
    std::string scratch = a.scratch;
    if (scratch.empty())
        scratch = (std::filesystem::temp_directory_path() / ("screenlab-verify-" + std::to_string(seed))).string();
    const auto results = run_suite(*suite, seed, parallel(a.threads), scratch);
    bool all = true;
    for (const auto& r : results) {
        std::cout << format_result(r) << std::endl;
        if (!r.informational) all = all && r.pass;
    }
    std::cout << (all ? "all criteria passed\n" : "some criteria FAILED\n");
    return all ? kExitOk : kExitVerifyFailed;
}

struct GenerateArgs {
    std::string config;
    std::string seed;
    std::string out = "data.csv";
};

int cmd_generate(const GenerateArgs& a) {
    const RunConfig rc = load_run_config(a.config);
    const auto* cfg = std::get_if<DiscreteDgpConfig>(&rc.scenario.dgp);
    if (!cfg) throw Error(ErrorCode::InvalidConfig, "generate needs a discrete dgp");
    const Seed base = resolve_seed(a.seed, rc.scenario.base_seed).value();
    // Same draw as replication 0 of a simulation with this seed.
    const Sample s = generate_discrete(*cfg, derive_seed(base, static_cast<std::uint64_t>(Purpose::Replication), 0));
    write_dataset_file(a.out, s);
    std::cout << "wrote " << s.size() << " units to " << a.out << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Screened instrumental-variables toolkit for experiments with partial compliance"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a Monte Carlo scenario from a config file");
    simulate_cmd->add_option("config", sim.config, "Config file")->required();
    simulate_cmd->add_option("--seed", sim.seed, "Base seed (overrides config and SCREENLAB_SEED)");
    simulate_cmd->add_option("--reps", sim.reps, "Number of replications");
    simulate_cmd->add_option("--out", sim.out, "Output directory");
    simulate_cmd->add_option("--format", sim.format, "Replication table format")
        ->check(CLI::IsMember({"csv", "json"}));
    simulate_cmd->add_option("--threads", sim.threads, "Worker threads, 0 = all");

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Estimate and test screening on a dataset");
    analyze_cmd->add_option("dataset", an.dataset, "Dataset CSV")->required();
    analyze_cmd->add_option("--alpha", an.alpha, "Test level")->capture_default_str();
    analyze_cmd->add_option("--n-boot", an.n_boot, "Bootstrap replicates")->capture_default_str();
    analyze_cmd->add_option("--seed", an.seed, "Bootstrap seed");
    analyze_cmd->add_option("--out", an.out, "Write the JSON report here as well");
    analyze_cmd->add_option("--population-sign", an.sign, "Known sign of the first stage")
        ->check(CLI::IsMember({"positive", "negative"}))
        ->capture_default_str();
    analyze_cmd->add_option("--threads", an.threads, "Worker threads, 0 = all");

    PowerArgs pw;
    auto* power_cmd = app.add_subcommand("power", "Standard-error and MDE gains from screening");
    power_cmd->add_option("--config", pw.config, "Config file whose [power] section supplies defaults");
    power_cmd->add_option("--pi-hat", pw.pi_hat, "Estimated complier share");
    auto* alpha_opt = power_cmd->add_option("--alpha", pw.alpha, "Two-sided test level")->capture_default_str();
    auto* target_opt = power_cmd->add_option("--power", pw.power, "Target power")->capture_default_str();
    power_cmd->add_option("--r", pw.r, "Candidate retention fractions")->expected(1, -1);
    auto* se_opt = power_cmd->add_option("--se", pw.se, "Unscreened standard error");
    auto* n_opt = power_cmd->add_option("--n", pw.n, "Sample size, to compute the unscreened se");
    auto* sigma_opt = power_cmd->add_option("--sigma-u", pw.sigma_u, "Outcome noise sd")->capture_default_str();
    auto* q_opt = power_cmd->add_option("--q", pw.q, "Share assigned to treatment")->capture_default_str();
    power_cmd->add_option("--json", pw.json_out, "Write the JSON report here as well");
    se_opt->excludes(n_opt);

    VerifyArgs ver;
    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance criteria");
    verify_cmd->add_option("--suite", ver.suite, "lemma1, prop1, prop2, diagnostics or all")->capture_default_str();
    verify_cmd->add_option("--seed", ver.seed, "Root seed");
    verify_cmd->add_option("--threads", ver.threads, "Worker threads, 0 = all");
    verify_cmd->add_option("--scratch", ver.scratch, "Directory for the determinism check's files");

    GenerateArgs gen;
    auto* generate_cmd = app.add_subcommand("generate", "Export one discrete-DGP sample as a dataset CSV");
    generate_cmd->add_option("config", gen.config, "Config file with a discrete [dgp]")->required();
    generate_cmd->add_option("--seed", gen.seed, "Seed (overrides config and SCREENLAB_SEED)");
    generate_cmd->add_option("--out", gen.out, "Dataset path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate_cmd) return cmd_simulate(sim);
        if (*analyze_cmd) return cmd_analyze(an);
        if (*power_cmd) {
            pw.alpha_set = alpha_opt->count() > 0;
            pw.power_set = target_opt->count() > 0;
            pw.sigma_u_set = sigma_opt->count() > 0;
            pw.q_set = q_opt->count() > 0;
            return cmd_power(pw);
        }
        if (*verify_cmd) return cmd_verify(ver);
        if (*generate_cmd) return cmd_generate(gen);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
