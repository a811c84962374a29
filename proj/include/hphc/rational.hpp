#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace hphc {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Raised when an exact computation is asked for a size beyond its configured bound.
class SizeBoundError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// An exact probability: a canonical rational in [0, 1].
class ExactProb {
public:
    ExactProb() = default;
    explicit ExactProb(Rational value);
    ExactProb(long num, unsigned long den);

    const Rational& value() const { return value_; }
    std::string numerator() const { return value_.get_num().get_str(); }
    std::string denominator() const { return value_.get_den().get_str(); }
    std::string str() const { return value_.get_str(); }

    double to_double() const { return value_.get_d(); }
    /// Natural log, accurate for values far below the double range.
    double log() const;

    friend bool operator==(const ExactProb& a, const ExactProb& b) { return a.value_ == b.value_; }
    friend bool operator<(const ExactProb& a, const ExactProb& b) { return a.value_ < b.value_; }

private:
    Rational value_{0};
};

/// Natural-log probability; -inf encodes zero.
struct LogProb {
    double log_value = 0.0;

    double prob() const;
};

/// Parses "a/b", an integer, or a finite decimal such as "0.25".
Rational parse_rational(const std::string& text);

/// log(|x|) for a non-zero big integer without overflowing a double.
double log_abs(const BigInt& x);
/// log(x) for positive rationals of any magnitude; -inf for zero.
double log_of(const Rational& x);

inline Rational pow2_inv(unsigned long e) {
    Rational r(1);
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), e);
    return r;
}

}  // namespace hphc
