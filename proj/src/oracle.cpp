#include "hphc/oracle.hpp"

#include "hphc/parallel.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hphc {

char to_char(FluctuationKind kind) {
    switch (kind) {
        case FluctuationKind::G: return 'G';
        case FluctuationKind::K: return 'K';
        case FluctuationKind::M: return 'M';
    }
    return '?';
}

ExactProb JointFluctuationTable::at(FluctuationKind kind, long r) const {
    const auto it = entries.find({kind, r});
    return it == entries.end() ? ExactProb() : it->second;
}

Rational JointFluctuationTable::total(FluctuationKind kind) const {
    Rational sum(0);
    for (const auto& [key, p] : entries) {
        if (key.first == kind) {
            sum += p.value();
        }
    }
    return sum;
}

JointFluctuationTable enumerate_1d_joint(long n, unsigned workers) {
    if (n > kMaxEnumerationN) {
        throw SizeBoundError("enumerate_1d_joint: n above " + std::to_string(kMaxEnumerationN));
    }
    if (n < 1) {
        throw std::invalid_argument("enumerate_1d_joint: n must be in [1, " +
                                    std::to_string(kMaxEnumerationN) + "]");
    }
    const int len = static_cast<int>(2 * n);
    const std::size_t width = static_cast<std::size_t>(len + 1);
    constexpr unsigned kShardBits = 6;
    const unsigned shard_bits = std::min<unsigned>(kShardBits, static_cast<unsigned>(len));
    const std::size_t shards = std::size_t{1} << shard_bits;
    const std::uint64_t per_shard = (std::uint64_t{1} << len) >> shard_bits;

    // counts[shard][kind * width + r]
    std::vector<std::vector<std::uint64_t>> counts(shards, std::vector<std::uint64_t>(3 * width, 0));
    parallel_slices(shards, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t shard = begin; shard < end; ++shard) {
            auto& c = counts[shard];
            const std::uint64_t first = shard * per_shard;
            for (std::uint64_t path = first; path < first + per_shard; ++path) {
                if (std::popcount(path) != n) {
                    continue;  // not a bridge
                }
                long s = 0, g = 0, k = 0, m = 0;
                for (int i = 0; i < len; ++i) {
                    g += s >= 0;  // S(i), i in [0, 2n)
                    s += (path >> i) & 1 ? 1 : -1;
                    if (i + 1 < len) {
                        k += s > 0;  // S(i+1), i+1 in (0, 2n-1]
                    }
                    m += s <= 0;  // S(i+1), i+1 in (0, 2n]
                }
                ++c[static_cast<std::size_t>(g)];
                ++c[width + static_cast<std::size_t>(k)];
                ++c[2 * width + static_cast<std::size_t>(m)];
            }
        }
    });

    JointFluctuationTable table;
    table.n = n;
    constexpr std::array kinds{FluctuationKind::G, FluctuationKind::K, FluctuationKind::M};
    for (std::size_t kind = 0; kind < 3; ++kind) {
        for (std::size_t r = 0; r < width; ++r) {
            BigInt total(0);
            for (const auto& c : counts) {
                total += static_cast<unsigned long>(c[kind * width + r]);
            }
            if (total != 0) {
                table.entries.emplace(std::pair{kinds[kind], static_cast<long>(r)},
                                      ExactProb(Rational(total) * pow2_inv(static_cast<unsigned long>(len))));
            }
        }
    }
    return table;
}

ExactProb OccupationVector::at(const LatticeSite& site) const {
    const auto it = mass.find(site);
    return it == mass.end() ? ExactProb() : it->second;
}

Rational OccupationVector::total() const {
    Rational sum(0);
    for (const auto& [site, p] : mass) {
        sum += p.value();
    }
    return sum;
}

OccupationVector dp_site_distribution(long steps, const PJProfile& profile, LatticeSite start) {
    if (steps > kMaxDpSteps) {
        throw SizeBoundError("dp_site_distribution: steps above " + std::to_string(kMaxDpSteps));
    }
    if (steps < 0) {
        throw std::invalid_argument("dp_site_distribution: steps must be in [0, " +
                                    std::to_string(kMaxDpSteps) + "]");
    }
    const long radius = steps;
    const long side = 2 * radius + 1;
    auto index = [&](long dk, long dj) {
        return static_cast<std::size_t>((dj + radius) * side + (dk + radius));
    };

    // Per-row vertical and horizontal step probabilities.
    std::vector<Rational> vertical(static_cast<std::size_t>(side)), horizontal(static_cast<std::size_t>(side));
    for (long dj = -radius; dj <= radius; ++dj) {
        const Rational& p = profile.p(start.j + dj);
        vertical[static_cast<std::size_t>(dj + radius)] = p;
        horizontal[static_cast<std::size_t>(dj + radius)] = Rational(1, 2) - p;
    }

    std::vector<Rational> cur(static_cast<std::size_t>(side * side)), next(cur.size());
    cur[index(0, 0)] = 1;
    Rational share;
    for (long t = 0; t < steps; ++t) {
        for (auto& v : next) v = 0;
        // After t steps the mass lies within |dk| + |dj| <= t.
        for (long dj = -t; dj <= t; ++dj) {
            const auto row = static_cast<std::size_t>(dj + radius);
            for (long dk = -(t - std::labs(dj)); dk <= t - std::labs(dj); ++dk) {
                const Rational& w = cur[index(dk, dj)];
                if (w == 0) continue;
                share = w * horizontal[row];
                if (share != 0) {
                    next[index(dk + 1, dj)] += share;
                    next[index(dk - 1, dj)] += share;
                }
                share = w * vertical[row];
                next[index(dk, dj + 1)] += share;
                next[index(dk, dj - 1)] += share;
            }
        }
        std::swap(cur, next);
    }

    OccupationVector out;
    out.step = steps;
    for (long dj = -radius; dj <= radius; ++dj) {
        for (long dk = -radius; dk <= radius; ++dk) {
            const Rational& w = cur[index(dk, dj)];
            if (w != 0) {
                out.mass.emplace(LatticeSite{start.k + dk, start.j + dj}, ExactProb(w));
            }
        }
    }
    return out;
}

ExactProb dp_return_prob(long N) {
    if (N > kMaxDpReturnN) {
        throw SizeBoundError("dp_return_prob: N above " + std::to_string(kMaxDpReturnN));
    }
    if (N < 0) {
        throw std::invalid_argument("dp_return_prob: N must be in [0, " + std::to_string(kMaxDpReturnN) + "]");
    }
    return dp_site_distribution(2 * N, PJProfile::hphc()).at(LatticeSite{0, 0});
}

}  // namespace hphc
