#include "hphc/local_time.hpp"

#include "hphc/parallel.hpp"
#include "hphc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hphc {

std::uint64_t LocalTimeLedger::at(const LatticeSite& site) const {
    const auto it = counts.find(site);
    return it == counts.end() ? 0 : it->second;
}

std::uint64_t LocalTimeLedger::total() const {
    std::uint64_t sum = 0;
    for (const auto& [site, c] : counts) sum += c;
    return sum;
}

LocalTimeLedger accumulate_local_time(TrajectoryStream& trajectory,
                                      const std::optional<std::vector<LatticeSite>>& sites) {
    LocalTimeLedger ledger;
    long seen = 0;
    if (sites) {
        for (const auto& s : *sites) ledger.counts.emplace(s, 0);
        trajectory.for_each([&](const LatticeSite& site) {
            ++seen;
            const auto it = ledger.counts.find(site);
            if (it != ledger.counts.end()) ++it->second;
        });
    } else {
        trajectory.for_each([&](const LatticeSite& site) {
            ++seen;
            ++ledger.counts[site];
        });
    }
    ledger.steps_taken = seen - 1;
    return ledger;
}

namespace {

double green_scale(long N, double g) {
    return N < 2 ? std::numeric_limits<double>::quiet_NaN() : g / std::log(static_cast<double>(N));
}

// Runs `replicas` independent walks, replica r seeded by split_seed(master, r);
// body(r, stream) fills slot r of caller-owned storage.
template <class Body>
void run_replicas(long replicas, long steps, std::uint64_t master_seed, const SimulationSpec& sim, Body&& body) {
    parallel_slices(static_cast<std::size_t>(replicas), sim.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            TrajectoryStream stream(sim.engine, sim.profile, steps, split_seed(master_seed, r));
            body(r, stream);
        }
    });
}

}  // namespace

std::vector<GreenRow> green_table(std::span<const long> N_grid, EvalMode mode, long exact_bound, unsigned workers) {
    if (N_grid.empty()) {
        throw std::invalid_argument("green_table: empty grid");
    }
    for (std::size_t i = 0; i < N_grid.size(); ++i) {
        if (N_grid[i] < 1 || (i > 0 && N_grid[i] <= N_grid[i - 1])) {
            throw std::invalid_argument("green_table: grid must be positive and ascending");
        }
    }
    const long max_k = N_grid.back() / 2;
    std::vector<GreenRow> rows;
    if (mode == EvalMode::log) {
        const auto logs = log_return_prob_range(max_k, workers);
        double g = 0.0;
        long k = 0;
        for (long N : N_grid) {
            for (; k <= N / 2; ++k) g += logs[static_cast<std::size_t>(k)].prob();
            rows.push_back(GreenRow{N, std::nullopt, g, green_scale(N, g)});
        }
        return rows;
    }
    if (max_k > exact_bound) {
        throw SizeBoundError("green_table: floor(N/2)=" + std::to_string(max_k) +
                             " exceeds the exact-mode bound " + std::to_string(exact_bound));
    }
    std::vector<Rational> terms(static_cast<std::size_t>(max_k + 1));
    terms[0] = 1;
    parallel_slices(static_cast<std::size_t>(max_k), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            terms[i + 1] = exact_return_prob(static_cast<long>(i + 1), exact_bound).value();
        }
    });
    Rational g(0);
    long k = 0;
    for (long N : N_grid) {
        for (; k <= N / 2; ++k) g += terms[static_cast<std::size_t>(k)];
        const double gd = g.get_d();
        rows.push_back(GreenRow{N, g, gd, green_scale(N, gd)});
    }
    return rows;
}

GreenRow green_truncated(long N, EvalMode mode, long exact_bound) {
    const long grid[] = {N};
    return green_table(grid, mode == EvalMode::both ? EvalMode::exact : mode, exact_bound).front();
}

RatioStats ratio_experiment(const LatticeSite& site_a, const LatticeSite& site_b, long steps, long replicas,
                            std::uint64_t master_seed, const SimulationSpec& sim) {
    if (steps < 1 || replicas < 1) {
        throw std::invalid_argument("ratio_experiment: steps and replicas must be positive");
    }
    std::vector<std::uint64_t> xa(static_cast<std::size_t>(replicas)), xb(xa.size());
    run_replicas(replicas, steps, master_seed, sim, [&](std::size_t r, TrajectoryStream& stream) {
        std::uint64_t ca = 0, cb = 0;
        stream.for_each([&](const LatticeSite& s) {
            ca += s == site_a;
            cb += s == site_b;
        });
        xa[r] = ca;
        xb[r] = cb;
    });

    RatioStats out;
    out.site_a = site_a;
    out.site_b = site_b;
    out.steps = steps;
    out.replicas = replicas;
    double total_a = 0.0, total_b = 0.0;
    for (std::size_t r = 0; r < xa.size(); ++r) {
        total_a += static_cast<double>(xa[r]);
        total_b += static_cast<double>(xb[r]);
        if (xb[r] == 0) {
            ++out.zero_denominator;
        } else {
            out.ratios.push_back(static_cast<double>(xa[r]) / static_cast<double>(xb[r]));
        }
    }
    out.degenerate = 2 * out.zero_denominator >= replicas;
    out.ratio_of_totals = total_b > 0.0 ? total_a / total_b : std::numeric_limits<double>::quiet_NaN();
    if (out.ratios.empty()) {
        out.mean = out.ci_lo = out.ci_hi = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const MeanCI ci = bootstrap_mean_ci(out.ratios, 2000, 0.95, split_seed(master_seed, ~std::uint64_t{0}));
    out.mean = ci.mean;
    out.ci_lo = ci.lo;
    out.ci_hi = ci.hi;
    return out;
}

Rational ratio_limit(const PJProfile& profile, const LatticeSite& site_a, const LatticeSite& site_b) {
    Rational r = invariant_weight(profile, site_a.j) / invariant_weight(profile, site_b.j);
    r.canonicalize();
    return r;
}

ExponentialLawSample exponential_law_samples(long N, long replicas, std::uint64_t master_seed,
                                             const SimulationSpec& sim) {
    if (N < 3 || replicas < 1) {
        throw std::invalid_argument("exponential_law_samples: need N >= 3 (log N > 1) and replicas >= 1");
    }
    ExponentialLawSample out;
    out.N = N;
    out.replicas = replicas;
    out.scaled.resize(static_cast<std::size_t>(replicas));
    const double scale = std::numbers::pi / (2.0 * std::log(static_cast<double>(N)));
    const LatticeSite origin{};
    run_replicas(replicas, N, master_seed, sim, [&](std::size_t r, TrajectoryStream& stream) {
        std::uint64_t visits = 0;
        stream.for_each([&](const LatticeSite& s) { visits += s == origin; });
        out.scaled[r] = scale * static_cast<double>(visits);
    });
    out.ks_distance = ks_distance_exponential(out.scaled);
    out.low_power = replicas < kLowPowerReplicas;
    return out;
}

LilTable lil_diagnostic(std::span<const long> grid, long replicas, std::uint64_t master_seed,
                        const SimulationSpec& sim) {
    if (grid.empty() || replicas < 1) {
        throw std::invalid_argument("lil_diagnostic: empty grid or no replicas");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 16 || (i > 0 && grid[i] <= grid[i - 1])) {
            throw std::invalid_argument("lil_diagnostic: grid must be ascending with N >= 16");
        }
    }
    LilTable out;
    out.grid.assign(grid.begin(), grid.end());
    out.replicas = replicas;
    out.scaled.assign(static_cast<std::size_t>(replicas), std::vector<double>(grid.size()));
    out.running_max = out.scaled;
    auto denominator = [](long N) {
        const double l = std::log(static_cast<double>(N));
        return l * std::log(std::log(l));
    };
    const LatticeSite origin{};
    run_replicas(replicas, grid.back(), master_seed, sim, [&](std::size_t r, TrajectoryStream& stream) {
        std::uint64_t visits = 0;
        long t = 0;
        std::size_t next = 0;
        double best = 0.0;
        stream.for_each([&](const LatticeSite& s) {
            visits += s == origin;
            if (next < grid.size() && t == grid[next]) {
                const double v = static_cast<double>(visits) / denominator(t);
                best = std::max(best, v);
                out.scaled[r][next] = v;
                out.running_max[r][next] = best;
                ++next;
            }
            ++t;
        });
    });
    return out;
}

InvariantMeasure InvariantMeasure::reciprocal(const PJProfile& profile) {
    return InvariantMeasure{[profile](const LatticeSite& s) { return invariant_weight(profile, s.j); }};
}

InvariantMeasure InvariantMeasure::constant(Rational value) {
    return InvariantMeasure{[value](const LatticeSite&) { return value; }};
}

std::map<LatticeSite, Rational> invariant_residual(const PJProfile& profile, const InvariantMeasure& mu,
                                                   long radius) {
    if (radius < 1) {
        throw std::invalid_argument("invariant_residual: radius must be positive");
    }
    std::map<LatticeSite, Rational> out;
    const Rational half(1, 2);
    for (long j = -radius; j <= radius; ++j) {
        const Rational h = half - profile.p(j);
        for (long k = -radius; k <= radius; ++k) {
            Rational res = mu.mu({k + 1, j}) * h + mu.mu({k - 1, j}) * h + mu.mu({k, j + 1}) * profile.p(j + 1) +
                           mu.mu({k, j - 1}) * profile.p(j - 1) - mu.mu({k, j});
            res.canonicalize();
            out.emplace(LatticeSite{k, j}, std::move(res));
        }
    }
    return out;
}

ComparisonModel ComparisonModel::parse(std::string_view text) {
    ComparisonModel m;
    if (text == "simple") {
        m.kind = ModelKind::simple;
    } else if (text == "comb") {
        m.kind = ModelKind::comb;
    } else if (text == "hphc") {
        m.kind = ModelKind::hphc;
    } else if (text.starts_with("periodic:")) {
        m.kind = ModelKind::periodic;
        m.periodic_values = PJProfile::parse(text).periodic_values();
    } else {
        throw std::invalid_argument("unknown model '" + std::string(text) + "'");
    }
    return m;
}

std::string ComparisonModel::to_string() const {
    switch (kind) {
        case ModelKind::simple: return "simple";
        case ModelKind::comb: return "comb";
        case ModelKind::hphc: return "hphc";
        case ModelKind::periodic: return PJProfile::periodic(periodic_values).to_string();
    }
    return "?";
}

double comparison_asymptotics(const ComparisonModel& model, long N) {
    if (N < 1) {
        throw std::invalid_argument("comparison_asymptotics: N must be positive");
    }
    const double n = static_cast<double>(N);
    switch (model.kind) {
        case ModelKind::simple: return 1.0 / (std::numbers::pi * n);
        case ModelKind::hphc: return asymptotic_return_prob(N);
        case ModelKind::comb: return 1.0 / (std::pow(2.0, 4.5) * std::tgamma(0.25) * std::pow(n, 0.75));
        case ModelKind::periodic: break;
    }
    const auto& ps = model.periodic_values;
    if (ps.empty()) {
        throw std::invalid_argument("periodic model needs values");
    }
    Rational gamma(0);
    for (const auto& p : ps) gamma += 1 / p;
    gamma /= 2 * static_cast<long>(ps.size());
    gamma.canonicalize();
    if (gamma <= 1) {
        throw std::invalid_argument("periodic model needs gamma > 1 (not all p_j = 1/2)");
    }
    const double g = gamma.get_d();
    return 1.0 / (4.0 * std::numbers::pi * n * ps.front().get_d() * std::sqrt(g - 1.0));
}

}  // namespace hphc
