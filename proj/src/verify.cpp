#include "hphc/verify.hpp"

#include "hphc/combinatorics.hpp"
#include "hphc/local_time.hpp"
#include "hphc/oracle.hpp"
#include "hphc/return_prob.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace hphc {

namespace {

constexpr long kClosedFormMaxN = 24;
constexpr long kNegBinMaxA = 64;
constexpr long kResidualRadius = 20;

class Checker {
public:
    Checker(std::string name, const VerifyOptions& opts)
        : result_{std::move(name), 0, 0, {}}, faulty_(opts.inject_fault == result_.name) {}

    // Records one case; the first case is perturbed when this check is the injected fault.
    void expect_equal(Rational lhs, const Rational& rhs, const std::string& label) {
        if (faulty_ && result_.cases == 0) {
            lhs += pow2_inv(40);
        }
        record(lhs == rhs, label + ": " + lhs.get_str() + " != " + rhs.get_str());
    }

    void expect(bool ok, const std::string& label) {
        if (faulty_ && result_.cases == 0) ok = false;
        record(ok, label);
    }

    CheckResult take() { return std::move(result_); }

private:
    void record(bool ok, const std::string& label) {
        ++result_.cases;
        if (!ok) {
            if (result_.failures == 0) result_.detail = label;
            ++result_.failures;
        }
    }

    CheckResult result_;
    bool faulty_;
};

std::string nr(long n, long r) { return "n=" + std::to_string(n) + " r=" + std::to_string(r); }

CheckResult closed_vs_sum(const VerifyOptions& o) {
    Checker c("closed_vs_sum", o);
    for (long n = 1; n <= kClosedFormMaxN; ++n)
        for (long r = 1; r <= n; ++r)
            c.expect_equal(p2n2r_sum(n, r).value(), p2n2r_closed(n, r).value(), nr(n, r));
    return c.take();
}

CheckResult marginal(const VerifyOptions& o) {
    Checker c("marginal", o);
    for (long n = 1; n <= kClosedFormMaxN; ++n) {
        Rational sum(0);
        for (long g = 1; g <= 2 * n; ++g) sum += p2n_any(n, g).value();
        c.expect_equal(sum, central_return_1d(n).value(), "n=" + std::to_string(n));
    }
    return c.take();
}

CheckResult enumeration_checks(const VerifyOptions& o, const std::vector<JointFluctuationTable>& tables,
                               const std::string& name) {
    Checker c(name, o);
    for (const auto& t : tables) {
        const long n = t.n;
        if (name == "enumeration_equality") {
            for (long g = 0; g <= 2 * n; ++g)
                c.expect_equal(t.at(FluctuationKind::G, g).value(), p2n_any(n, g).value(), nr(n, g));
        } else if (name == "parity") {
            for (long r = 1; r <= n; ++r)
                c.expect_equal(t.at(FluctuationKind::G, 2 * r - 1).value(), t.at(FluctuationKind::G, 2 * r).value(),
                               nr(n, r));
        } else if (name == "sparre_andersen") {
            for (long r = 0; r < n; ++r) {
                c.expect_equal(t.at(FluctuationKind::K, 2 * r).value(), t.at(FluctuationKind::K, 2 * r + 1).value(),
                               "pairing " + nr(n, r));
                c.expect_equal(t.at(FluctuationKind::K, 2 * r).value(), sparre_andersen_k(n, r).value(),
                               "closed " + nr(n, r));
            }
        } else if (name == "mk_event_identity") {
            for (long r = 0; r <= 2 * n; ++r)
                c.expect_equal(t.at(FluctuationKind::M, r).value(), t.at(FluctuationKind::K, 2 * n - r).value(),
                               nr(n, r));
        } else if (name == "bridge_marginal") {
            c.expect_equal(t.total(FluctuationKind::G), central_return_1d(n).value(), "n=" + std::to_string(n));
        }
    }
    return c.take();
}

CheckResult negbin_finite(const VerifyOptions& o) {
    Checker c("negbin_finite_identity", o);
    for (long a = 0; a <= kNegBinMaxA; ++a) c.expect_equal(negbin_half_sum(a), Rational(1), "a=" + std::to_string(a));
    return c.take();
}

CheckResult negbin_infinite(const VerifyOptions& o) {
    Checker c("negbin_infinite_identity", o);
    const Rational bound = pow2_inv(64);
    for (long a = 0; a <= kNegBinMaxA; ++a) {
        const auto s = negbin_full_sum(a, 64);
        const Rational gap = 2 - s.partial;
        c.expect(gap >= 0 && gap <= s.tail_bound && s.tail_bound <= bound, "a=" + std::to_string(a));
    }
    return c.take();
}

CheckResult return_prob_oracle(const VerifyOptions& o) {
    Checker c("return_prob_oracle", o);
    const long top = std::min(o.max_n, kMaxDpReturnN);
    for (long N = 1; N <= top; ++N)
        c.expect_equal(exact_return_prob(N).value(), dp_return_prob(N).value(), "N=" + std::to_string(N));
    return c.take();
}

std::vector<PJProfile> residual_profiles() {
    return {PJProfile::hphc(), PJProfile::simple(), PJProfile::comb(),
            PJProfile::parse("periodic:1/4,1/2"), PJProfile::parse("periodic:1/3,1/8,1/2,1/4")};
}

CheckResult dp_mass(const VerifyOptions& o) {
    Checker c("dp_mass_conservation", o);
    for (const auto& profile : residual_profiles())
        for (long steps : {0L, 1L, 5L, 12L})
            c.expect_equal(dp_site_distribution(steps, profile).total(), Rational(1),
                           profile.to_string() + " steps=" + std::to_string(steps));
    return c.take();
}

CheckResult residuals(const VerifyOptions& o) {
    Checker c("invariant_residual", o);
    for (const auto& profile : residual_profiles()) {
        for (const auto& [site, res] : invariant_residual(profile, InvariantMeasure::reciprocal(profile), kResidualRadius))
            c.expect_equal(res, Rational(0), profile.to_string() + " at " + to_string(site));
    }
    return c.take();
}

}  // namespace

std::vector<std::string> verification_check_names() {
    return {"closed_vs_sum",        "marginal",          "enumeration_equality",   "parity",
            "bridge_marginal",      "sparre_andersen",   "mk_event_identity",      "negbin_finite_identity",
            "negbin_infinite_identity", "return_prob_oracle", "dp_mass_conservation", "invariant_residual"};
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    if (options.max_n < 1) {
        throw std::invalid_argument("verify: max-n must be positive");
    }
    const auto names = verification_check_names();
    if (!options.inject_fault.empty() &&
        std::find(names.begin(), names.end(), options.inject_fault) == names.end()) {
        throw std::invalid_argument("unknown check '" + options.inject_fault + "'");
    }
    std::vector<JointFluctuationTable> tables;
    for (long n = 1; n <= std::min(options.max_n, kMaxEnumerationN); ++n) {
        tables.push_back(enumerate_1d_joint(n, options.workers));
    }
    std::vector<CheckResult> out;
    out.push_back(closed_vs_sum(options));
    out.push_back(marginal(options));
    for (const char* name : {"enumeration_equality", "parity", "bridge_marginal", "sparre_andersen", "mk_event_identity"})
        out.push_back(enumeration_checks(options, tables, name));
    out.push_back(negbin_finite(options));
    out.push_back(negbin_infinite(options));
    out.push_back(return_prob_oracle(options));
    out.push_back(dp_mass(options));
    out.push_back(residuals(options));
    return out;
}

}  // namespace hphc
