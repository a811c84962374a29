#include "hphc/return_prob.hpp"

#include "hphc/combinatorics.hpp"
#include "hphc/numeric.hpp"
#include "hphc/parallel.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hphc {

namespace {

// Rows 4^n P(2n, 2r), r = 1..n (index 0 unused), shared across calls.
class BridgeRowCache {
public:
    const std::vector<BigInt>& row(long n) {
        std::lock_guard lock(mutex_);
        while (static_cast<long>(rows_.size()) <= n) {
            const long m = static_cast<long>(rows_.size());
            std::vector<BigInt> row(static_cast<std::size_t>(m + 1));
            for (long r = 1; r <= m; ++r) {
                row[static_cast<std::size_t>(r)] = p2n2r_scaled(m, r);
            }
            rows_.push_back(std::move(row));
        }
        return rows_[static_cast<std::size_t>(n)];
    }

private:
    std::mutex mutex_;
    std::deque<std::vector<BigInt>> rows_;  // push_back keeps references valid
};

BridgeRowCache& bridge_rows() {
    static BridgeRowCache cache;
    return cache;
}

constexpr int kRescaleBits = 500;
constexpr long kRescaleEvery = 8;

// For one vertical half-length n and every horizontal half-length m in
// [m_lo, m_lo + out.size()), writes
//   log( c_{2m} * sum_{r=1}^{2n} P(2n, r) * C(2m + r, r) / 2^{2m + r} ).
// Each lane runs the ratio recurrence of C(M+r, r)/2^{M+r} in r with a
// private power-of-two exponent, so the arithmetic per lane is independent
// of how many lanes are evaluated together.
void block_logs(long n, const std::vector<double>& prow, long m_lo, std::span<double> out) {
    const std::size_t lanes = out.size();
    std::vector<double> big_m(lanes), b(lanes, 1.0), s(lanes, 0.0);
    std::vector<long> e(lanes);
    for (std::size_t i = 0; i < lanes; ++i) {
        const long m = m_lo + static_cast<long>(i);
        big_m[i] = static_cast<double>(2 * m);
        e[i] = -2 * m;
    }
    const double up = std::ldexp(1.0, kRescaleBits);
    const double down = std::ldexp(1.0, -kRescaleBits);
    const double negligible = std::ldexp(1.0, -200);
    for (long rp = 1; rp <= n; ++rp) {
        const double r1 = static_cast<double>(2 * rp - 1);
        const double r2 = static_cast<double>(2 * rp);
        const double inv1 = 1.0 / (2.0 * r1);
        const double inv2 = 1.0 / (2.0 * r2);
        const double p = prow[static_cast<std::size_t>(rp)];
        for (std::size_t i = 0; i < lanes; ++i) {
            const double b1 = b[i] * (big_m[i] + r1) * inv1;
            const double b2 = b1 * (big_m[i] + r2) * inv2;
            s[i] += p * (b1 + b2);
            b[i] = b2;
        }
        if (rp % kRescaleEvery == 0) {
            for (std::size_t i = 0; i < lanes; ++i) {
                if (b[i] > up) {
                    b[i] *= down;
                    s[i] *= down;
                    e[i] += kRescaleBits;
                } else if (b[i] != 0.0 && b[i] < s[i] * negligible) {
                    // Past the mode the ratio is below one; what remains is
                    // far below double resolution of s.
                    b[i] = 0.0;
                } else if (b[i] != 0.0 && b[i] < down) {
                    b[i] *= up;
                    s[i] *= up;
                    e[i] -= kRescaleBits;
                }
            }
        }
    }
    for (std::size_t i = 0; i < lanes; ++i) {
        const long m = m_lo + static_cast<long>(i);
        out[i] = std::log(s[i]) + static_cast<double>(e[i]) * std::numbers::ln2 + log_central_1d(m);
    }
}

double log_first_term(long N) {
    return log_central_1d(N) - 2.0 * static_cast<double>(N) * std::numbers::ln2;
}

}  // namespace

namespace detail {

std::vector<double> bridge_row_double(long n) {
    std::vector<double> row(static_cast<std::size_t>(n + 1), 0.0);
    const double nd = static_cast<double>(n);
    const double prefactor = std::exp(log_central_1d(n)) / (2.0 * (nd + 1.0));
    double q = 1.0;  // Q(0, n)
    for (long r = 1; r <= n; ++r) {
        const double rd = static_cast<double>(r);
        // Q(r, n) = Q(r-1, n) * (2r-1)(n-r+1) / (r (2n-2r+1))
        q *= (2.0 * rd - 1.0) * (nd - rd + 1.0) / (rd * (2.0 * nd - 2.0 * rd + 1.0));
        row[static_cast<std::size_t>(r)] = prefactor * (1.0 + (2.0 * rd - nd) / nd * q);
    }
    return row;
}

}  // namespace detail

ExactProb exact_return_prob(long N, long exact_bound) {
    if (N < 1) {
        throw std::invalid_argument("exact_return_prob: N must be positive");
    }
    if (N > exact_bound) {
        throw SizeBoundError("exact_return_prob: N=" + std::to_string(N) +
                             " exceeds the exact-mode bound " + std::to_string(exact_bound));
    }
    // Every term is an integer over 2^{4N}; accumulate numerators.
    BigInt total = binomial(2 * N, N);
    BigInt inner, c, shifted;
    for (long n = 1; n <= N; ++n) {
        const long m = N - n;
        const auto& row = bridge_rows().row(n);
        inner = 0;
        c = 1;  // C(2m + r, r)
        for (long r = 1; r <= 2 * n; ++r) {
            c *= static_cast<unsigned long>(2 * m + r);
            mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(r));
            mpz_mul(shifted.get_mpz_t(), row[static_cast<std::size_t>((r + 1) / 2)].get_mpz_t(), c.get_mpz_t());
            mpz_mul_2exp(shifted.get_mpz_t(), shifted.get_mpz_t(), static_cast<unsigned long>(2 * n - r));
            inner += shifted;
        }
        total += binomial(2 * m, m) * inner;
    }
    return ExactProb(Rational(total) * pow2_inv(static_cast<unsigned long>(4 * N)));
}

LogProb log_return_prob(long N) {
    if (N < 1) {
        throw std::invalid_argument("log_return_prob: N must be positive");
    }
    LogSumExp acc;
    acc.add(log_first_term(N));
    double block = 0.0;
    for (long n = 1; n <= N; ++n) {
        block_logs(n, detail::bridge_row_double(n), N - n, std::span<double>(&block, 1));
        acc.add(block);
    }
    return LogProb{acc.value()};
}

std::vector<LogProb> log_return_prob_range(long max_N, unsigned workers) {
    if (max_N < 0) {
        throw std::invalid_argument("log_return_prob_range: negative bound");
    }
    std::vector<LogProb> out(static_cast<std::size_t>(max_N + 1));
    out[0] = LogProb{0.0};
    // Each slice owns the accumulators of a contiguous range of N, and adds
    // the blocks in the same order (first term, then n ascending) as the
    // single-N routine.
    parallel_slices(static_cast<std::size_t>(max_N), workers, [&](std::size_t begin, std::size_t end) {
        const long lo = static_cast<long>(begin) + 1;
        const long hi = static_cast<long>(end);
        if (lo > hi) {
            return;
        }
        std::vector<LogSumExp> acc(static_cast<std::size_t>(hi - lo + 1));
        for (long N = lo; N <= hi; ++N) {
            acc[static_cast<std::size_t>(N - lo)].add(log_first_term(N));
        }
        std::vector<double> blocks;
        for (long n = 1; n <= hi; ++n) {
            const long first_N = std::max(lo, n);
            blocks.assign(static_cast<std::size_t>(hi - first_N + 1), 0.0);
            block_logs(n, detail::bridge_row_double(n), first_N - n, blocks);
            for (long N = first_N; N <= hi; ++N) {
                acc[static_cast<std::size_t>(N - lo)].add(blocks[static_cast<std::size_t>(N - first_N)]);
            }
        }
        for (long N = lo; N <= hi; ++N) {
            out[static_cast<std::size_t>(N)] = LogProb{acc[static_cast<std::size_t>(N - lo)].value()};
        }
    });
    return out;
}

double asymptotic_return_prob(long N) {
    if (N < 1) {
        throw std::invalid_argument("asymptotic_return_prob: N must be positive");
    }
    return 2.0 / (std::numbers::pi * static_cast<double>(N));
}

std::vector<ReturnProbRecord> scaled_convergence_table(std::span<const long> N_list, EvalMode mode,
                                                       long exact_bound, unsigned workers) {
    if (N_list.empty()) {
        throw std::invalid_argument("scaled_convergence_table: empty N list");
    }
    for (std::size_t i = 0; i < N_list.size(); ++i) {
        if (N_list[i] < 1 || (i > 0 && N_list[i] <= N_list[i - 1])) {
            throw std::invalid_argument("scaled_convergence_table: N list must be positive and ascending");
        }
    }
    if (mode == EvalMode::exact && N_list.back() > exact_bound) {
        throw SizeBoundError("N=" + std::to_string(N_list.back()) + " exceeds the exact-mode bound " +
                             std::to_string(exact_bound));
    }
    std::vector<ReturnProbRecord> records(N_list.size());
    parallel_slices(N_list.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            ReturnProbRecord rec;
            rec.N = N_list[i];
            if (mode == EvalMode::exact || (mode == EvalMode::both && rec.N <= exact_bound)) {
                rec.exact = exact_return_prob(rec.N, exact_bound);
            }
            rec.approx = mode == EvalMode::exact ? LogProb{rec.exact->log()} : log_return_prob(rec.N);
            rec.scaled = std::numbers::pi * static_cast<double>(rec.N) * rec.approx.prob() / 2.0;
            records[i] = std::move(rec);
        }
    });
    return records;
}

bool trends_toward_one(std::span<const ReturnProbRecord> records) {
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (!(std::fabs(records[i].scaled - 1.0) < std::fabs(records[i - 1].scaled - 1.0))) {
            return false;
        }
    }
    return true;
}

}  // namespace hphc
