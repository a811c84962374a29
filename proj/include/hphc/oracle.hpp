#pragma once

// Brute-force ground truth: exhaustive enumeration of 1D bridges and exact
// forward dynamic programming over the planar kernel.

#include "hphc/lattice.hpp"
#include "hphc/rational.hpp"

#include <map>
#include <string>
#include <utility>

namespace hphc {

inline constexpr long kMaxEnumerationN = 12;
inline constexpr long kMaxDpReturnN = 16;
inline constexpr long kMaxDpSteps = 32;

/// Occupation statistics of a 1D bridge S(0) = S(2n) = 0:
///   G: indices 0 <= j < 2n with S(j) >= 0
///   K: indices 0 <  j <= 2n-1 with S(j) > 0
///   M: indices 0 <  j <= 2n with S(j) <= 0
enum class FluctuationKind { G, K, M };

char to_char(FluctuationKind kind);

/// Joint masses P(stat = r, S(2n) = 0) over all 2^{2n} paths.
struct JointFluctuationTable {
    long n = 0;
    std::map<std::pair<FluctuationKind, long>, ExactProb> entries;  // zero masses omitted

    ExactProb at(FluctuationKind kind, long r) const;
    Rational total(FluctuationKind kind) const;
};

/// Enumerates every 2n-step +-1 path; n in [1, 12]. Work is sharded by path
/// prefix over `workers` threads and merged with exact integer counts.
JointFluctuationTable enumerate_1d_joint(long n, unsigned workers = 1);

/// Exact distribution after `steps` steps started from `start`.
struct OccupationVector {
    long step = 0;
    std::map<LatticeSite, ExactProb> mass;  // zero masses omitted

    ExactProb at(const LatticeSite& site) const;
    Rational total() const;
};

/// Forward DP over the kernel of `profile`; steps in [0, 32]. The grid is
/// the light cone of the start, so no mass is truncated.
OccupationVector dp_site_distribution(long steps, const PJProfile& profile, LatticeSite start = {});

/// P(C(2N) = (0,0)) for the half-plane half-comb walk by DP; N in [0, 16].
ExactProb dp_return_prob(long N);

}  // namespace hphc
