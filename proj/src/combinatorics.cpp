#include "hphc/combinatorics.hpp"

#include <stdexcept>
#include <string>

namespace hphc {

namespace {

void require_range(long r, long lo, long hi, const char* what) {
    if (r < lo || r > hi) {
        throw std::invalid_argument(std::string(what) + ": r=" + std::to_string(r) +
                                    " outside [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
    }
}

void require_positive(long n, const char* what) {
    if (n < 1) {
        throw std::invalid_argument(std::string(what) + ": n must be positive");
    }
}

// Closed-form shape shared by the G and K laws:
//   c_{2n} / (2 (n+1)) * (1 + (signed_offset / n) * Q(r, n)).
Rational bridge_law(long n, long r, long signed_offset) {
    Rational value = Rational(binomial(2 * n, n)) * pow2_inv(2 * n + 1) / (n + 1);
    Rational bracket = 1 + Rational(signed_offset) / n * q_ratio(r, n).value();
    return value * bracket;
}

}  // namespace

BigInt binomial(long n, long k) {
    if (n < 0) {
        throw std::invalid_argument("binomial: negative upper argument");
    }
    if (k < 0 || k > n) {
        return 0;
    }
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

ExactProb central_return_1d(long n) {
    if (n < 0) {
        throw std::invalid_argument("central_return_1d: negative n");
    }
    return ExactProb(Rational(binomial(2 * n, n)) * pow2_inv(2 * n));
}

ExactProb q_ratio(long r, long n) {
    require_positive(n, "q_ratio");
    require_range(r, 0, n, "q_ratio");
    Rational q(binomial(2 * r, r) * binomial(2 * n - 2 * r, n - r), binomial(2 * n, n));
    return ExactProb(std::move(q));
}

ExactProb p2n2r_closed(long n, long r) {
    require_positive(n, "p2n2r_closed");
    require_range(r, 1, n, "p2n2r_closed");
    return ExactProb(bridge_law(n, r, 2 * r - n));
}

ExactProb p2n2r_sum(long n, long r) {
    require_positive(n, "p2n2r_sum");
    require_range(r, 1, n, "p2n2r_sum");
    Rational total(0);
    for (long j = 1; j <= r; ++j) {
        Rational left(binomial(2 * j - 1, j), 2 * j - 1);
        Rational right(binomial(2 * n + 1 - 2 * j, n + 1 - j), 2 * n + 1 - 2 * j);
        total += left * right;
    }
    total *= pow2_inv(2 * n);
    return ExactProb(std::move(total));
}

ExactProb p2n_odd(long n, long r) {
    require_positive(n, "p2n_odd");
    require_range(r, 1, n, "p2n_odd");
    return p2n2r_closed(n, r);
}

ExactProb p2n_any(long n, long g) {
    require_positive(n, "p2n_any");
    if (g < 1 || g > 2 * n) {
        return ExactProb();
    }
    return g % 2 == 0 ? p2n2r_closed(n, g / 2) : p2n_odd(n, (g + 1) / 2);
}

BigInt p2n2r_scaled(long n, long r) {
    Rational scaled = p2n2r_closed(n, r).value();
    mpz_mul_2exp(scaled.get_num_mpz_t(), scaled.get_num_mpz_t(), static_cast<unsigned long>(2 * n));
    scaled.canonicalize();
    if (scaled.get_den() != 1) {
        throw std::logic_error("p2n2r_scaled: 4^n P(2n,2r) not integral");
    }
    return scaled.get_num();
}

ExactProb sparre_andersen_k(long n, long r) {
    require_positive(n, "sparre_andersen_k");
    require_range(r, 0, n - 1, "sparre_andersen_k");
    return ExactProb(bridge_law(n, r, n - 2 * r));
}

ExactProb negbin_pmf(long K, long r) {
    if (K < 1) {
        throw std::invalid_argument("negbin_pmf: K must be positive");
    }
    if (r < 0) {
        return ExactProb();
    }
    return ExactProb(Rational(binomial(K - 1 + r, r)) * pow2_inv(K + r));
}

ExactProb negbin_cdf(long K, long r_max) {
    if (K < 1) {
        throw std::invalid_argument("negbin_cdf: K must be positive");
    }
    if (r_max < -1) {
        throw std::invalid_argument("negbin_cdf: r_max must be >= -1");
    }
    // Common denominator 2^{K + r_max}: accumulate integer numerators.
    BigInt num(0);
    BigInt term(1);  // C(K-1+r, r)
    for (long r = 0; r <= r_max; ++r) {
        if (r > 0) {
            term *= K - 1 + r;
            mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(r));
        }
        BigInt shifted;
        mpz_mul_2exp(shifted.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(r_max - r));
        num += shifted;
    }
    if (r_max < 0) {
        return ExactProb();
    }
    return ExactProb(Rational(num) * pow2_inv(K + r_max));
}

Rational negbin_half_sum(long a) {
    if (a < 0) {
        throw std::invalid_argument("negbin_half_sum: negative a");
    }
    Rational total(0);
    for (long r = 0; r <= a; ++r) {
        total += Rational(binomial(a + r, r)) * pow2_inv(a + r);
    }
    total.canonicalize();
    return total;
}

TailBoundedSum negbin_full_sum(long a, unsigned tail_bits) {
    if (a < 0) {
        throw std::invalid_argument("negbin_full_sum: negative a");
    }
    const Rational target = pow2_inv(tail_bits);
    TailBoundedSum out;
    out.partial = 0;
    for (long r = 0;; ++r) {
        Rational term = Rational(binomial(a + r, r)) * pow2_inv(a + r);
        out.partial += term;
        out.terms = r + 1;
        // Term ratio (a+r+1)/(2(r+1)) is non-increasing in r and < 1 once r >= a,
        // so the tail beyond r is at most term * q / (1 - q).
        if (r >= a) {
            Rational q(a + r + 1, 2 * (r + 1));
            q.canonicalize();
            Rational bound = term * q / (1 - q);
            if (bound <= target) {
                out.tail_bound = bound;
                break;
            }
        }
    }
    out.partial.canonicalize();
    out.tail_bound.canonicalize();
    return out;
}

}  // namespace hphc
