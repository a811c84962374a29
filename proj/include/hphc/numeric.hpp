#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace hphc {

/// Streaming log-sum-exp with a running maximum.
class LogSumExp {
public:
    void add(double log_term) {
        if (log_term == -std::numeric_limits<double>::infinity()) {
            return;
        }
        if (log_term <= max_) {
            sum_ += std::exp(log_term - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }

    double value() const {
        return sum_ == 0.0 ? -std::numeric_limits<double>::infinity() : max_ + std::log(sum_);
    }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

/// log C(2m, m) / 4^m.
inline double log_central_1d(long m) {
    const double md = static_cast<double>(m);
    return std::lgamma(2.0 * md + 1.0) - 2.0 * std::lgamma(md + 1.0) - 2.0 * md * std::numbers::ln2;
}

}  // namespace hphc
