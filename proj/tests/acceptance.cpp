// Acceptance criteria AC1-AC12. Prints one PASS/FAIL line per criterion.
// Usage: acceptance [AC1 AC2 ...]   (no arguments runs all)

#include "hphc/cli.hpp"
#include "hphc/combinatorics.hpp"
#include "hphc/local_time.hpp"
#include "hphc/oracle.hpp"
#include "hphc/parallel.hpp"
#include "hphc/return_prob.hpp"
#include "hphc/stats.hpp"
#include "hphc/walk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace hphc;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome ac1() {
    bool ok = exact_return_prob(1).value() == Rational(5, 16) && dp_return_prob(1).value() == Rational(5, 16);
    for (long N = 1; N <= 12; ++N) ok = ok && exact_return_prob(N) == dp_return_prob(N);
    return {ok, "exact = DP for N=1..12, N=1 gives 5/16"};
}

Outcome ac2() {
    long cases = 0, bad = 0;
    for (long n = 1; n <= 10; ++n) {
        const auto t = enumerate_1d_joint(n, default_workers());
        Rational marginal(0);
        for (long r = 1; r <= n; ++r) {
            const auto closed = p2n2r_closed(n, r);
            bad += !(closed == p2n2r_sum(n, r));
            bad += !(closed == t.at(FluctuationKind::G, 2 * r));
            bad += !(p2n_odd(n, r) == t.at(FluctuationKind::G, 2 * r - 1));
            bad += !(t.at(FluctuationKind::G, 2 * r - 1) == t.at(FluctuationKind::G, 2 * r));
            cases += 4;
        }
        for (long g = 1; g <= 2 * n; ++g) marginal += p2n_any(n, g).value();
        bad += marginal != central_return_1d(n).value() || t.total(FluctuationKind::G) != marginal;
        ++cases;
    }
    return {bad == 0, std::to_string(cases) + " exact comparisons, " + std::to_string(bad) + " mismatches"};
}

Outcome ac3() {
    long cases = 0, bad = 0;
    for (long n = 1; n <= 10; ++n) {
        const auto t = enumerate_1d_joint(n, default_workers());
        for (long r = 0; r < n; ++r, ++cases)
            bad += !(t.at(FluctuationKind::K, 2 * r) == t.at(FluctuationKind::K, 2 * r + 1));
        for (long r = 0; r <= 2 * n; ++r, ++cases)
            bad += !(t.at(FluctuationKind::M, r) == t.at(FluctuationKind::K, 2 * n - r));
    }
    return {bad == 0, std::to_string(cases) + " exact comparisons, " + std::to_string(bad) + " mismatches"};
}

Outcome ac4() {
    bool ok = true;
    Rational worst(0);
    for (long a = 0; a <= 64; ++a) {
        ok = ok && negbin_half_sum(a) == 1;
        const auto s = negbin_full_sum(a, 64);
        const Rational gap = 2 - s.partial;
        ok = ok && gap >= 0 && gap <= s.tail_bound && s.tail_bound <= pow2_inv(64);
        if (s.tail_bound > worst) worst = s.tail_bound;
    }
    return {ok, "a<=64; largest tail bound 2^" + fmt("%.2f", std::log2(worst.get_d()))};
}

Outcome ac5() {
    const std::vector<long> grid{10, 100, 10000};
    const auto rows = scaled_convergence_table(grid, EvalMode::log, kDefaultExactBound, default_workers());
    const double e10 = std::abs(rows[0].scaled - 1), e100 = std::abs(rows[1].scaled - 1),
                 e4 = std::abs(rows[2].scaled - 1);
    const bool ok = e4 < e100 && e100 < e10 && rows[2].scaled > 0.8 && rows[2].scaled < 1.2;
    return {ok, "scaled(10)=" + fmt("%.6f", rows[0].scaled) + " scaled(100)=" + fmt("%.6f", rows[1].scaled) +
                    " scaled(1e4)=" + fmt("%.6f", rows[2].scaled)};
}

Outcome ac6() {
    long sites = 0, nonzero = 0;
    for (const char* text : {"hphc", "simple", "comb", "periodic:1/3", "periodic:1/4,1/2", "periodic:1/2,1/5,1/3",
                             "periodic:1/3,1/8,1/2,1/4"}) {
        const auto profile = PJProfile::parse(text);
        for (const auto& [site, res] : invariant_residual(profile, InvariantMeasure::reciprocal(profile), 20)) {
            ++sites;
            nonzero += res != 0;
        }
    }
    return {nonzero == 0, std::to_string(sites) + " site residuals, " + std::to_string(nonzero) + " nonzero"};
}

Outcome ac7() {
    constexpr long steps = 8, replicas = 1000000;
    const auto exact = dp_site_distribution(steps, PJProfile::hphc());
    std::map<LatticeSite, std::size_t> index;
    std::vector<double> probs;
    for (const auto& [site, mass] : exact.mass) {
        index[site] = probs.size();
        probs.push_back(mass.to_double());
    }
    std::string detail;
    bool ok = true;
    for (Engine e : {Engine::kernel, Engine::construction}) {
        std::vector<LatticeSite> ends(replicas);
        parallel_slices(replicas, default_workers(), [&](std::size_t b, std::size_t end) {
            for (std::size_t r = b; r < end; ++r) {
                TrajectoryStream s(e, PJProfile::hphc(), steps, split_seed(kSeed, r));
                s.for_each([&](const LatticeSite& site) { ends[r] = site; });
            }
        });
        std::vector<std::uint64_t> counts(probs.size(), 0);
        long outside = 0;
        for (const auto& s : ends) {
            const auto it = index.find(s);
            if (it == index.end()) {
                ++outside;
            } else {
                ++counts[it->second];
            }
        }
        const auto chi = chi_square_gof(counts, probs);
        ok = ok && outside == 0 && chi.p_value >= 1e-3;
        detail += to_string(e) + ": chi2=" + fmt("%.1f", chi.statistic) + " dof=" + std::to_string(chi.dof) +
                  " p=" + fmt("%.4f", chi.p_value) + "; ";
    }
    return {ok, detail};
}

Outcome ac8() {
    SimulationSpec sim;
    sim.workers = default_workers();
    const auto down = ratio_experiment({0, 1}, {0, -1}, 1000000, 200, kSeed, sim);
    const auto side = ratio_experiment({0, 1}, {3, 2}, 1000000, 200, kSeed, sim);
    const bool ok_down = down.mean > 1.6 && down.mean < 2.4;
    const bool ok_side = side.mean > 0.8 && side.mean < 1.25;
    auto describe = [](const RatioStats& s) {
        return fmt("mean=%.4f", s.mean) + fmt(" ci=[%.3f,", s.ci_lo) + fmt("%.3f]", s.ci_hi) +
               " zero_den=" + std::to_string(s.zero_denominator) + fmt(" ratio_of_totals=%.4f", s.ratio_of_totals);
    };
    return {ok_down && ok_side, std::string("(0,1)/(0,-1) ") + (ok_down ? "in" : "OUT of") + " (1.6,2.4): " +
                                    describe(down) + "; (0,1)/(3,2) " + (ok_side ? "in" : "OUT of") +
                                    " (0.8,1.25): " + describe(side)};
}

Outcome ac9() {
    SimulationSpec sim;
    sim.workers = default_workers();
    const auto small = exponential_law_samples(1000, 2000, kSeed, sim);
    const auto large = exponential_law_samples(1000000, 2000, kSeed, sim);
    return {large.ks_distance < small.ks_distance,
            "KS(1e3)=" + fmt("%.4f", small.ks_distance) + " KS(1e6)=" + fmt("%.4f", large.ks_distance)};
}

Outcome ac10() {
    const std::vector<long> grid{100, 10000};
    const auto rows = green_table(grid, EvalMode::log, kDefaultExactBound, default_workers());
    const double target = 2 / std::numbers::pi;
    const double d2 = std::abs(rows[0].scaled - target), d4 = std::abs(rows[1].scaled - target);
    return {d4 < d2, "g(100)/log100=" + fmt("%.6f", rows[0].scaled) + " g(1e4)/log1e4=" + fmt("%.6f", rows[1].scaled) +
                         " target=" + fmt("%.6f", target)};
}

Outcome ac11() {
    const std::vector<long> grid{16, 1000, 10000, 100000, 1000000};
    SimulationSpec one, many;
    many.workers = std::max(2u, default_workers());
    const auto a = lil_diagnostic(grid, 20, kSeed, one);
    const auto b = lil_diagnostic(grid, 20, kSeed, many);
    bool finite = true;
    for (std::size_t r = 0; r < a.scaled.size(); ++r)
        for (std::size_t i = 0; i < grid.size(); ++i)
            finite = finite && std::isfinite(a.scaled[r][i]) && a.scaled[r][i] >= 0 &&
                     std::isfinite(a.running_max[r][i]);
    const bool same = a.scaled == b.scaled && a.running_max == b.running_max;
    return {finite && same, std::string("finite=") + (finite ? "yes" : "no") + " deterministic=" + (same ? "yes" : "no")};
}

Outcome ac12() {
    const fs::path dir = fs::temp_directory_path() / ("hphc_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> runs{
        {"return-prob", "--grid", "1,10,100,1000", "--mode", "both"},
        {"exact", "--quantity", "p2n", "--n", "6"},
        {"simulate", "--steps", "8", "--replicas", "20000", "--seed", "3"},
        {"simulate", "--steps", "50", "--engine", "construction", "--seed", "4"},
        {"local-time", "--ratio", "0,1:0,-1", "--steps", "100000", "--replicas", "40", "--seed", "9"},
        {"local-time", "--task", "exp-law", "--grid", "100,10000", "--replicas", "100", "--format", "json"},
        {"local-time", "--task", "lil", "--grid", "16,1000,10000", "--replicas", "5"},
        {"local-time", "--task", "green", "--grid", "10,100", "--mode", "exact"},
        {"local-time", "--task", "residual", "--profile", "periodic:1/4,1/3", "--radius", "5"},
        {"local-time", "--task", "ledger", "--steps", "1000", "--seed", "8"},
        {"compare", "--models", "simple,hphc,comb,periodic:1/4,1/3", "--grid", "10,1000"},
        {"verify", "--max-n", "8"},
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    std::ostringstream sink;
    long identical = 0;
    std::string mismatched;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const fs::path first = dir / ("first" + std::to_string(i)), second = dir / ("second" + std::to_string(i));
        auto args = runs[i];
        args.insert(args.begin(), "hphc");
        args.insert(args.end(), {"--workers", "4", "--out", first.string()});
        const int c1 = run_cli(args, sink, sink);
        const int c2 = run_cli({"hphc", runs[i][0], "--config", first.string(), "--workers", "1", "--out",
                                second.string()},
                               sink, sink);
        const bool same = c1 == 0 && c2 == 0 && fs::file_size(first) > 0 && slurp(first) == slurp(second);
        identical += same;
        if (!same) mismatched += " [" + runs[i][0] + " " + runs[i][1] + " " + runs[i][2] + "]";
    }
    fs::remove_all(dir);
    return {identical == static_cast<long>(runs.size()),
            std::to_string(identical) + "/" + std::to_string(runs.size()) +
                " artifacts byte-identical when re-run from their embedded config with a different worker count" +
                (mismatched.empty() ? "" : "; mismatched:" + mismatched)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},   {"AC6", ac6},
        {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}, {"AC12", ac12},
    };
    std::vector<std::string> wanted(argv + 1, argv + argc);
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), name) == wanted.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%-5s %s  %s  (%.1fs)\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
