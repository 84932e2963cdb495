#include "screenlab/kernels.hpp"

#include <exception>
#include <limits>

#include <omp.h>

namespace screenlab {

int effective_threads(const ParallelOptions& opts) {
    if (opts.execution == Execution::Serial) return 1;
    return opts.threads > 0 ? opts.threads : omp_get_max_threads();
}

void for_each_index(std::size_t n, const ParallelOptions& opts, const std::function<void(std::size_t)>& body) {
    if (opts.execution == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr first;
    std::size_t first_index = std::numeric_limits<std::size_t>::max();
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(effective_threads(opts))
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(screenlab_for_each_error)
            {
                if (static_cast<std::size_t>(i) < first_index) {
                    first_index = static_cast<std::size_t>(i);
                    first = std::current_exception();
                }
            }
        }
    }
    if (first) std::rethrow_exception(first);
}

CellCounts count_cells(const StratifiedCodes& codes) {
    CellCounts c;
    for (auto code : codes.arm0) ++c.cells[0][code & 3u];
    for (auto code : codes.arm1) ++c.cells[1][code & 3u];
    return c;
}

CellCounts resample_cells(const StratifiedCodes& codes, Seed seed, std::uint64_t replicate) {
    CellCounts c;
    Stream stream(seed, Purpose::Bootstrap, replicate);
    const auto n0 = static_cast<std::uint32_t>(codes.arm0.size());
    const auto n1 = static_cast<std::uint32_t>(codes.arm1.size());
    auto& c0 = c.cells[0];
    auto& c1 = c.cells[1];
    for (std::uint32_t i = 0; i < n0; ++i) ++c0[codes.arm0[stream.below(n0)] & 3u];
    for (std::uint32_t i = 0; i < n1; ++i) ++c1[codes.arm1[stream.below(n1)] & 3u];
    return c;
}

std::vector<double> bootstrap_replicates_serial(const StratifiedCodes& codes, CountStatistic stat, int n_boot,
                                                Seed seed) {
    std::vector<double> out(static_cast<std::size_t>(n_boot));
    for (int b = 0; b < n_boot; ++b) out[static_cast<std::size_t>(b)] = stat(resample_cells(codes, seed, b));
    return out;
}

std::vector<double> bootstrap_replicates_parallel(const StratifiedCodes& codes, CountStatistic stat, int n_boot,
                                                  Seed seed, int threads) {
    std::vector<double> out(static_cast<std::size_t>(n_boot));
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int b = 0; b < n_boot; ++b) out[static_cast<std::size_t>(b)] = stat(resample_cells(codes, seed, b));
    return out;
}

std::vector<double> bootstrap_replicates(const StratifiedCodes& codes, CountStatistic stat, int n_boot, Seed seed,
                                         const ParallelOptions& opts) {
    if (opts.execution == Execution::Serial) return bootstrap_replicates_serial(codes, stat, n_boot, seed);
    return bootstrap_replicates_parallel(codes, stat, n_boot, seed, opts.threads);
}

}  // namespace screenlab
