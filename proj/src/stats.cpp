#include "hphc/stats.hpp"

#include "hphc/walk.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hphc {

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                               double min_expected) {
    if (counts.size() != probs.size() || counts.empty()) {
        throw std::invalid_argument("chi_square_gof: counts and probs must be non-empty and aligned");
    }
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
    if (total == 0.0) {
        throw std::invalid_argument("chi_square_gof: no observations");
    }
    const double prob_sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    ChiSquareResult out;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = total * probs[i];
        const double observed = static_cast<double>(counts[i]);
        if (expected < min_expected) {
            pooled_obs += observed;
            pooled_exp += expected;
            continue;
        }
        out.statistic += (observed - expected) * (observed - expected) / expected;
        ++out.bins;
    }
    pooled_exp += std::max(0.0, 1.0 - prob_sum) * total;
    if (pooled_exp > 0.0) {
        out.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++out.bins;
    } else if (pooled_obs > 0.0) {
        // Observations in cells of zero probability.
        out.statistic = std::numeric_limits<double>::infinity();
        ++out.bins;
    }
    out.dof = out.bins - 1;
    if (out.dof < 1) {
        out.p_value = 1.0;
        return out;
    }
    if (!std::isfinite(out.statistic)) {
        out.p_value = 0.0;
        return out;
    }
    const boost::math::chi_squared dist(static_cast<double>(out.dof));
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    return out;
}

double ks_distance_exponential(std::vector<double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("ks_distance_exponential: no samples");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = samples[i] <= 0.0 ? 0.0 : -std::expm1(-samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double mean_of(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mu) * (x - mu);
    return ss / static_cast<double>(xs.size() - 1);
}

MeanCI bootstrap_mean_ci(std::span<const double> samples, int resamples, double level, std::uint64_t seed) {
    MeanCI out;
    out.mean = mean_of(samples);
    if (samples.size() < 2 || resamples < 1) {
        out.lo = out.hi = out.mean;
        return out;
    }
    RandomStream rng(seed);
    const std::uint64_t n = samples.size();
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto& m : means) {
        double sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            // Lemire-style multiply-shift; bias is below 2^-40 for n < 2^24.
            const auto pick = static_cast<std::size_t>((static_cast<unsigned __int128>(rng.bits()) * n) >> 64);
            sum += samples[pick];
        }
        m = sum / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    const double alpha = (1.0 - level) / 2.0;
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(means.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, means.size() - 1);
        return means[lo] + (pos - static_cast<double>(lo)) * (means[hi] - means[lo]);
    };
    out.lo = quantile(alpha);
    out.hi = quantile(1.0 - alpha);
    return out;
}

}  // namespace hphc
