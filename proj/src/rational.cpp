#include "hphc/rational.hpp"

#include <cmath>
#include <limits>

namespace hphc {

ExactProb::ExactProb(Rational value) : value_(std::move(value)) {
    value_.canonicalize();
    if (value_ < 0 || value_ > 1) {
        throw std::domain_error("ExactProb out of [0,1]: " + value_.get_str());
    }
}

ExactProb::ExactProb(long num, unsigned long den)
    : ExactProb(den == 0 ? throw std::domain_error("ExactProb: zero denominator") : Rational(num, den)) {}

Rational parse_rational(const std::string& text) {
    if (text.empty()) {
        throw std::invalid_argument("empty rational");
    }
    const auto dot = text.find('.');
    try {
        if (dot == std::string::npos) {
            Rational r(text, 10);
            if (r.get_den() == 0) {
                throw std::invalid_argument("zero denominator");
            }
            r.canonicalize();
            return r;
        }
        const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        Rational r(BigInt(digits, 10));
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(text.size() - dot - 1));
        r /= Rational(scale);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("not a rational number: '" + text + "'");
    }
}

double ExactProb::log() const { return log_of(value_); }

double LogProb::prob() const { return std::exp(log_value); }

double log_abs(const BigInt& x) {
    if (x == 0) {
        return -std::numeric_limits<double>::infinity();
    }
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

double log_of(const Rational& x) {
    if (x == 0) {
        return -std::numeric_limits<double>::infinity();
    }
    if (x < 0) {
        throw std::domain_error("log of negative rational");
    }
    return log_abs(x.get_num()) - log_abs(x.get_den());
}

}  // namespace hphc
