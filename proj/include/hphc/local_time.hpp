#pragma once

// Local time Xi((k,j), N) = #{0 <= r <= N : C(r) = (k,j)} and the
// statistics built from it: the truncated Green function, visit ratios,
// the exponential limit law at the origin, LIL-scaled diagnostics, the
// invariant measure, and asymptotic constants of related planar walks.

#include "hphc/lattice.hpp"
#include "hphc/return_prob.hpp"
#include "hphc/walk.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hphc {

struct LocalTimeLedger {
    std::unordered_map<LatticeSite, std::uint64_t, LatticeSiteHash> counts;
    long steps_taken = 0;

    std::uint64_t at(const LatticeSite& site) const;
    std::uint64_t total() const;
};

/// Consumes the rest of `trajectory`. With `sites`, only those sites are tracked.
LocalTimeLedger accumulate_local_time(TrajectoryStream& trajectory,
                                      const std::optional<std::vector<LatticeSite>>& sites = std::nullopt);

struct GreenRow {
    long N = 0;
    std::optional<Rational> exact;  // exact mode only
    double g = 0.0;
    double scaled = 0.0;  // g / log N (NaN for N = 1)
};

/// g(N) = sum_{k=0}^{floor(N/2)} P(C(2k) = (0,0)).
GreenRow green_truncated(long N, EvalMode mode, long exact_bound = kDefaultExactBound);

/// Rows for an ascending grid, sharing one pass over the return probabilities.
std::vector<GreenRow> green_table(std::span<const long> N_grid, EvalMode mode,
                                  long exact_bound = kDefaultExactBound, unsigned workers = 1);

struct SimulationSpec {
    PJProfile profile = PJProfile::hphc();
    Engine engine = Engine::kernel;
    unsigned workers = 1;
};

struct RatioStats {
    LatticeSite site_a, site_b;
    long steps = 0;
    long replicas = 0;
    std::vector<double> ratios;  // replicas with Xi(b) > 0, in replica order
    long zero_denominator = 0;
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double ratio_of_totals = 0.0;  // sum Xi(a) / sum Xi(b)
    bool degenerate = false;       // Xi(b) = 0 in at least half of the replicas
};

/// Per-replica Xi(a, N) / Xi(b, N) with a 95% bootstrap interval on the mean.
RatioStats ratio_experiment(const LatticeSite& site_a, const LatticeSite& site_b, long steps, long replicas,
                            std::uint64_t master_seed, const SimulationSpec& sim = {});

/// Limit of Xi(a)/Xi(b): the ratio of invariant weights p_b / p_a.
Rational ratio_limit(const PJProfile& profile, const LatticeSite& site_a, const LatticeSite& site_b);

struct ExponentialLawSample {
    long N = 0;
    long replicas = 0;
    std::vector<double> scaled;  // pi Xi((0,0), N) / (2 log N), replica order
    double ks_distance = 0.0;
    bool low_power = false;
};

inline constexpr long kLowPowerReplicas = 30;

ExponentialLawSample exponential_law_samples(long N, long replicas, std::uint64_t master_seed,
                                             const SimulationSpec& sim = {});

struct LilTable {
    std::vector<long> grid;
    long replicas = 0;
    // [replica][grid index]
    std::vector<std::vector<double>> scaled;       // Xi((0,0), N) / (log N log log log N)
    std::vector<std::vector<double>> running_max;  // max of `scaled` over grid points <= N
};

/// Diagnostic only: the limsup constant is out of reach at simulable N.
LilTable lil_diagnostic(std::span<const long> grid, long replicas, std::uint64_t master_seed,
                        const SimulationSpec& sim = {});

/// A measure on Z^2, evaluated exactly.
struct InvariantMeasure {
    std::function<Rational(const LatticeSite&)> mu;

    /// mu(k, j) = 1 / p_j.
    static InvariantMeasure reciprocal(const PJProfile& profile);
    static InvariantMeasure constant(Rational value);
};

/// mu(k+1,j)(1/2-p_j) + mu(k-1,j)(1/2-p_j) + mu(k,j+1)p_{j+1} + mu(k,j-1)p_{j-1} - mu(k,j)
/// for all |k|, |j| <= radius.
std::map<LatticeSite, Rational> invariant_residual(const PJProfile& profile, const InvariantMeasure& mu,
                                                   long radius);

enum class ModelKind { simple, periodic, comb, hphc };

struct ComparisonModel {
    ModelKind kind = ModelKind::hphc;
    std::vector<Rational> periodic_values;  // periodic only

    /// "simple", "comb", "hphc" or "periodic:p0,p1,...".
    static ComparisonModel parse(std::string_view text);
    std::string to_string() const;
};

/// Asymptotic P(C(2N) = (0,0)) of each model:
///   simple 1/(pi N); hphc 2/(pi N); comb 1/(2^{9/2} Gamma(1/4) N^{3/4});
///   periodic 1/(4 pi N p_0 sqrt(gamma - 1)), gamma = sum_j 1/p_j / (2L).
double comparison_asymptotics(const ComparisonModel& model, long N);

}  // namespace hphc
