#pragma once

// Return probability P(C(2N) = (0,0)) of the half-plane half-comb walk.
//
// The walk interlaces a vertical simple walk (2n steps, ending at 0) with a
// horizontal simple walk (2N - 2n steps, ending at 0); the number of
// geometric horizontal runs it may use is the non-negative occupation count
// of the vertical bridge. Summing over n and that count gives
//
//   C(2N,N)/4^{2N} + sum_{n=1}^{N} sum_{r=1}^{2n} P(2n,r) c_{2N-2n}
//                        * C(2N-2n+r, r) / 2^{2N-2n+r}.

#include "hphc/rational.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hphc {

inline constexpr long kDefaultExactBound = 512;

enum class EvalMode { exact, log, both };

struct ReturnProbRecord {
    long N = 0;
    std::optional<ExactProb> exact;
    LogProb approx;
    double scaled = 0.0;  // pi * N * P / 2
};

/// Exact rational value of the double sum. Throws SizeBoundError for N > exact_bound.
ExactProb exact_return_prob(long N, long exact_bound = kDefaultExactBound);

/// Log-domain value of the same sum; practical to N ~ 1e5.
LogProb log_return_prob(long N);

/// log P(C(2N) = (0,0)) for every N in [0, max_N]; entry N matches log_return_prob(N) bit for bit.
std::vector<LogProb> log_return_prob_range(long max_N, unsigned workers = 1);

/// 2 / (pi N).
double asymptotic_return_prob(long N);

/// One record per N; N_list must be non-empty and strictly ascending.
/// Exact mode throws SizeBoundError past the bound; `both` leaves `exact`
/// empty there.
std::vector<ReturnProbRecord> scaled_convergence_table(std::span<const long> N_list, EvalMode mode,
                                                       long exact_bound = kDefaultExactBound,
                                                       unsigned workers = 1);

/// True when |scaled - 1| strictly decreases along the table.
bool trends_toward_one(std::span<const ReturnProbRecord> records);

namespace detail {
/// P(2n, 2r) for r = 1..n in double precision; index 0 is unused.
std::vector<double> bridge_row_double(long n);
}  // namespace detail

}  // namespace hphc
