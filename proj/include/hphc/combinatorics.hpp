#pragma once

// Exact combinatorics of the one-dimensional simple walk: return
// probabilities, the joint law of the non-negative occupation count on
// bridges, and the negative binomial sums of geometric run lengths.

#include "hphc/rational.hpp"

namespace hphc {

/// C(n, k); zero when k < 0 or k > n. Throws std::invalid_argument for n < 0.
BigInt binomial(long n, long k);

/// c_{2n} = P(S(2n) = 0) = C(2n, n) / 4^n.
ExactProb central_return_1d(long n);

/// Q(r, n) = C(2r, r) C(2n-2r, n-r) / C(2n, n), for 0 <= r <= n.
ExactProb q_ratio(long r, long n);

/// P(G_{2n} = 2r, S(2n) = 0) from the closed form, 1 <= r <= n.
///
/// G_{2n} counts indices 0 <= j < 2n with S(j) >= 0.
ExactProb p2n2r_closed(long n, long r);

/// Same quantity through the Catalan convolution
///   4^{-n} sum_{j=1}^{r} C(2j-1, j)/(2j-1) * C(2n+1-2j, n+1-j)/(2n+1-2j).
ExactProb p2n2r_sum(long n, long r);

/// P(G_{2n} = 2r - 1, S(2n) = 0), which equals the even mass at 2r.
ExactProb p2n_odd(long n, long r);

/// P(G_{2n} = g, S(2n) = 0) for any g; zero outside [1, 2n].
ExactProb p2n_any(long n, long g);

/// 4^n * P(G_{2n} = 2r, S(2n) = 0): always an integer (a Catalan convolution).
BigInt p2n2r_scaled(long n, long r);

/// Closed form of P(K_{2n-1} = 2r, S(2n) = 0), 0 <= r <= n-1, where
/// K counts indices 0 < j <= 2n-1 with S(j) > 0.
ExactProb sparre_andersen_k(long n, long r);

/// P(U_K = r) = C(K-1+r, r) / 2^{K+r}, U_K a sum of K geometric(1/2) run lengths.
ExactProb negbin_pmf(long K, long r);

/// P(U_K <= r_max); zero for r_max = -1.
ExactProb negbin_cdf(long K, long r_max);

/// sum_{r=0}^{a} C(a+r, r) / 2^{a+r}; exactly 1 for every a >= 0.
Rational negbin_half_sum(long a);

struct TailBoundedSum {
    Rational partial;     // sum of the first `terms` terms
    Rational tail_bound;  // rigorous upper bound on the omitted tail
    long terms = 0;
};

/// sum_{r>=0} C(a+r, r) / 2^{a+r} (limit 2), truncated once a geometric
/// ratio bound puts the remaining tail below 2^{-tail_bits}.
TailBoundedSum negbin_full_sum(long a, unsigned tail_bits = 64);

}  // namespace hphc
