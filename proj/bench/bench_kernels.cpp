// Serial reference vs OpenMP kernels: wall time and bitwise agreement.
//
//   screenlab_bench [threads] [repeats]

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "screenlab/diagnostics.hpp"
#include "screenlab/dgp.hpp"
#include "screenlab/kernels.hpp"
#include "screenlab/montecarlo.hpp"

using namespace screenlab;

namespace {

double best_of(int repeats, const std::function<void()>& body) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
    return true;
}

std::vector<double> betas(const RepTable& t) {
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (const auto& r : t.rows) out.push_back(r.beta_hat);
    return out;
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
                identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int threads = argc > 1 ? std::atoi(argv[1]) : 0;
    const int repeats = argc > 2 ? std::max(1, std::atoi(argv[2])) : 3;
    const ParallelOptions serial{Execution::Serial, 1};
    const ParallelOptions par{Execution::Parallel, threads};
    std::printf("threads: %d, best of %d\n", effective_threads(par), repeats);
    std::printf("%-28s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");
    bool ok = true;

    {
        Scenario sc;
        DiscreteDgpConfig cfg;
        cfg.n = 10000;
        sc.dgp = cfg;
        sc.n_reps = 400;
        sc.base_seed = 11;
        RepTable a, b;
        const double ts = best_of(repeats, [&] { a = run_scenario(sc, serial); });
        const double tp = best_of(repeats, [&] { b = run_scenario(sc, par); });
        const bool eq = same(betas(a), betas(b));
        ok = ok && eq;
        report("discrete scenario n=1e4", ts, tp, eq);
    }
    {
        Scenario sc;
        GaussianDgpConfig g;
        sc.dgp = g;
        sc.r_values = {0.25, 0.5, 0.75, 1.0};
        sc.apply_sign_screen = true;
        sc.n_reps = 20000;
        sc.base_seed = 12;
        RepTable a, b;
        const double ts = best_of(repeats, [&] { a = run_scenario(sc, serial); });
        const double tp = best_of(repeats, [&] { b = run_scenario(sc, par); });
        const bool eq = same(betas(a), betas(b));
        ok = ok && eq;
        report("gaussian scenario n=40", ts, tp, eq);
    }
    {
        DiscreteDgpConfig cfg;
        cfg.n = 5000;
        const auto codes = stratified_codes(generate_discrete(cfg, 13));
        std::vector<double> a, b;
        const double ts =
            best_of(repeats, [&] { a = bootstrap_replicates_serial(codes, retention_from_counts, 4999, 14); });
        const double tp = best_of(
            repeats, [&] { b = bootstrap_replicates_parallel(codes, retention_from_counts, 4999, 14, threads); });
        const bool eq = same(a, b);
        ok = ok && eq;
        report("bootstrap B=4999 n=5000", ts, tp, eq);
    }
    return ok ? 0 : 1;
}
