#pragma once

// Data-parallel kernels. Each kernel has a serial reference path and an
// OpenMP path; both produce bitwise-identical results because every work item
// draws from its own counter-based stream and writes to its own slot.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "screenlab/rng.hpp"

namespace screenlab {

enum class Execution { Serial, Parallel };

struct ParallelOptions {
    Execution execution = Execution::Parallel;
    int threads = 0;  // 0: OpenMP default
};

/// Runs body(i) for i in [0, n). If any call throws, the exception from the
/// lowest index is rethrown after the loop completes.
void for_each_index(std::size_t n, const ParallelOptions& opts, const std::function<void(std::size_t)>& body);

/// Number of threads the parallel path would use.
int effective_threads(const ParallelOptions& opts);

// One byte per unit, split by instrument arm, for stratified resampling.
inline constexpr std::uint8_t kTakeUpBit = 1;  // d = 1
inline constexpr std::uint8_t kStatedBit = 2;  // stated complier

struct StratifiedCodes {
    std::vector<std::uint8_t> arm0;  // z = 0
    std::vector<std::uint8_t> arm1;  // z = 1
};

/// cells[z][code] counts units in arm z with the given code.
struct CellCounts {
    std::array<std::array<std::uint32_t, 4>, 2> cells{};

    std::uint32_t arm_total(int z) const noexcept {
        const auto& a = cells[static_cast<std::size_t>(z)];
        return a[0] + a[1] + a[2] + a[3];
    }
};

using CountStatistic = double (*)(const CellCounts&);

CellCounts count_cells(const StratifiedCodes& codes);

/// Resamples each arm with replacement (replicate b uses stream
/// (seed, Bootstrap, b)) and evaluates stat on the resampled cell counts.
CellCounts resample_cells(const StratifiedCodes& codes, Seed seed, std::uint64_t replicate);

std::vector<double> bootstrap_replicates_serial(const StratifiedCodes& codes, CountStatistic stat, int n_boot,
                                                Seed seed);
std::vector<double> bootstrap_replicates_parallel(const StratifiedCodes& codes, CountStatistic stat, int n_boot,
                                                  Seed seed, int threads = 0);
std::vector<double> bootstrap_replicates(const StratifiedCodes& codes, CountStatistic stat, int n_boot, Seed seed,
                                         const ParallelOptions& opts);

}  // namespace screenlab
