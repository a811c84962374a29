#pragma once

#include <string>
#include <vector>

namespace hphc {

struct CheckResult {
    std::string name;
    long cases = 0;
    long failures = 0;
    std::string detail;  // first failing case, if any

    bool passed() const { return failures == 0 && cases > 0; }
};

struct VerifyOptions {
    long max_n = 10;           // enumeration and DP oracle bound
    std::string inject_fault;  // check name whose first compared value is perturbed (negative control)
    unsigned workers = 1;
};

/// Names of the checks run_verification performs, in report order.
std::vector<std::string> verification_check_names();

/// Exact cross-checks: closed vs sum form, parity, marginals, enumeration
/// and DP oracle equalities, negative binomial identities, mass
/// conservation and invariant-measure residuals.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace hphc
