#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hphc {

struct ChiSquareResult {
    double statistic = 0.0;
    long dof = 0;
    double p_value = 1.0;
    long bins = 0;  // after pooling
};

/// Pearson goodness of fit of counts against cell probabilities. Cells with
/// expected count below `min_expected` are pooled into one cell; probability
/// mass missing from `probs` (sum < 1) is treated as one more cell.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                               double min_expected = 5.0);

/// sup_x |F_n(x) - (1 - e^{-x})| for the empirical CDF of `samples`.
double ks_distance_exponential(std::vector<double> samples);

struct MeanCI {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Sample mean with a percentile bootstrap interval (deterministic in seed).
MeanCI bootstrap_mean_ci(std::span<const double> samples, int resamples, double level, std::uint64_t seed);

double mean_of(std::span<const double> xs);
double variance_of(std::span<const double> xs);  // unbiased

}  // namespace hphc
