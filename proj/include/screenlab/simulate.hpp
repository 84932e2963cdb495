#pragma once

#include <optional>
#include <string>

#include "screenlab/config.hpp"
#include "screenlab/montecarlo.hpp"

namespace screenlab {

struct SimulationResult {
    RepTable table;
    McSummary summary;
    std::optional<SizePowerResult> diagnostic;
};

SimulationResult simulate(const RunConfig& rc, const ParallelOptions& opts = {});

struct WrittenFiles {
    std::string table_path;
    std::string summary_path;
};

/// Writes reps.csv (or reps.json) and summary.json into out_dir, creating it
/// if needed. File contents depend only on the configuration.
WrittenFiles write_simulation(const SimulationResult& result, const RunConfig& rc, const std::string& out_dir);

/// Fixed-width human-readable summary.
std::string summary_text(const SimulationResult& result);

}  // namespace screenlab
