#include "screenlab/simulate.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "screenlab/errors.hpp"
#include "screenlab/report.hpp"

namespace screenlab {

SimulationResult simulate(const RunConfig& rc, const ParallelOptions& opts) {
    SimulationResult res;
    res.table = run_scenario(rc.scenario, opts);
    res.summary = summarize(res.table, rc.beta_target);
    if (rc.diagnostic) {
        res.diagnostic = size_power_run(rc.scenario, *rc.diagnostic, rc.alpha, rc.n_boot, opts);
        res.summary.diagnostic = std::string(to_string(*rc.diagnostic));
        res.summary.rejection_rate = res.diagnostic->rejection_rate;
        res.summary.rejection_rate_mcse = res.diagnostic->mcse;
    }
    return res;
}

WrittenFiles write_simulation(const SimulationResult& result, const RunConfig& rc, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::InvalidConfig, "cannot create output directory '" + out_dir + "'");

    WrittenFiles files;
    const fs::path dir(out_dir);
    files.table_path = (dir / (rc.format == TableFormat::Csv ? "reps.csv" : "reps.json")).string();
    files.summary_path = (dir / "summary.json").string();
    {
        std::ofstream out(files.table_path, std::ios::binary);
        if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + files.table_path + "'");
        if (rc.format == TableFormat::Csv)
            write_rep_table_csv(out, result.table);
        else
            out << rep_table_json(result.table).dump(2) << '\n';
    }
    {
        auto doc = to_json(result.summary);
        doc["scenario"] = to_json(rc.scenario);
        if (result.diagnostic) {
            doc["diagnostic"]["alpha"] = rc.alpha;
            doc["diagnostic"]["n_boot"] = rc.n_boot;
            doc["diagnostic"]["n_valid"] = result.diagnostic->n_valid;
        }
        std::ofstream out(files.summary_path, std::ios::binary);
        if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + files.summary_path + "'");
        out << doc.dump(2) << '\n';
    }
    return files;
}

std::string summary_text(const SimulationResult& result) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %6s %12s %12s %12s %12s %10s\n", "arm", "kept", "mean_beta", "emp_sd",
                  "mean_se", "med|bias|", "discard");
    out += line;
    for (const auto& a : result.summary.arms) {
        std::snprintf(line, sizeof line, "%-10s %6zu %12.6f %12.6f %12.6f %12.6f %10.4f\n", a.label.c_str(), a.n_kept,
                      a.mean_beta, a.empirical_sd, a.mean_se, a.median_abs_bias, a.discard_rate);
        out += line;
    }
    if (result.diagnostic) {
        std::snprintf(line, sizeof line, "%s rejection rate: %.4f (mcse %.4f, %zu valid reps)\n",
                      result.summary.diagnostic->c_str(), result.diagnostic->rejection_rate, result.diagnostic->mcse,
                      result.diagnostic->n_valid);
        out += line;
    }
    return out;
}

}  // namespace screenlab
