#include "screenlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace screenlab::stats {

double mean(std::span<const double> x) {
    if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sd(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> x, double p) {
    std::sort(x.begin(), x.end());
    return quantile_sorted(x, p);
}

double quantile_mcse_sorted(std::span<const double> sorted, double p) {
    if (sorted.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double m = static_cast<double>(sorted.size());
    const double spread = std::sqrt(m * p * (1.0 - p));
    const double last = m - 1.0;
    const auto lo = static_cast<std::size_t>(std::clamp(std::floor(m * p - spread), 0.0, last));
    const auto hi = static_cast<std::size_t>(std::clamp(std::ceil(m * p + spread), 0.0, last));
    return 0.5 * (sorted[hi] - sorted[lo]);
}

}  // namespace screenlab::stats
