#pragma once

#include <span>
#include <vector>

namespace screenlab::stats {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 divisor); 0 for fewer than two values.
double sd(std::span<const double> x);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);
double quantile(std::vector<double> x, double p);

/// Distribution-free Monte Carlo standard error of the p-quantile: half the
/// spread between the order statistics one binomial s.d. either side of rank
/// m*p.
double quantile_mcse_sorted(std::span<const double> sorted, double p);

}  // namespace screenlab::stats
