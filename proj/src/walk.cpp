#include "hphc/walk.hpp"

#include <cmath>
#include <stdexcept>

namespace hphc {

std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t replica) {
    std::uint64_t z = master_seed + (replica + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

long sample_geometric(RandomStream& rng) {
    // v in (2^{-(k+1)}, 2^{-k}]  <=>  Y = k. ilogb is exact, unlike log2.
    const double v = rng.uniform_pos();
    const int e = std::ilogb(v);
    return v == std::ldexp(1.0, e) ? -e : -e - 1;
}

long sample_negbin(long K, RandomStream& rng) {
    if (K < 1) {
        throw std::invalid_argument("sample_negbin: K must be positive");
    }
    long total = 0;
    for (long i = 0; i < K; ++i) {
        total += sample_geometric(rng);
    }
    return total;
}

long sample_negbin(long K, std::uint64_t seed) {
    RandomStream rng(seed);
    return sample_negbin(K, rng);
}

KernelStep step_kernel(const LatticeSite& site, const PJProfile& profile) {
    const Rational& p = profile.p(site.j);
    const Rational h = Rational(1, 2) - p;
    return KernelStep{{{
        {LatticeSite{site.k + 1, site.j}, h},
        {LatticeSite{site.k - 1, site.j}, h},
        {LatticeSite{site.k, site.j + 1}, p},
        {LatticeSite{site.k, site.j - 1}, p},
    }}};
}

ConstructionWalk::ConstructionWalk(RandomStream rng, LatticeSite start) : rng_(std::move(rng)) {
    state_.site = start;
    if (start.j >= 0) {
        draw_run();
    }
}

std::string to_string(Engine engine) {
    return engine == Engine::kernel ? "kernel" : "construction";
}

Engine parse_engine(std::string_view text) {
    if (text == "kernel") return Engine::kernel;
    if (text == "construction") return Engine::construction;
    throw std::invalid_argument("unknown engine '" + std::string(text) + "'");
}

namespace {

std::variant<KernelWalk, ConstructionWalk> make_walk(Engine engine, const PJProfile& profile,
                                                     std::uint64_t seed, LatticeSite start) {
    if (engine == Engine::construction) {
        if (profile.kind() != ProfileKind::hphc) {
            throw std::invalid_argument("the construction engine only builds the hphc walk");
        }
        return ConstructionWalk(RandomStream(seed), start);
    }
    return KernelWalk(profile, RandomStream(seed), start);
}

}  // namespace

TrajectoryStream::TrajectoryStream(Engine engine, const PJProfile& profile, long steps, std::uint64_t seed,
                                   LatticeSite start)
    : engine_(engine), steps_(steps), seed_(seed), start_(start), walk_(make_walk(engine, profile, seed, start)) {
    if (steps < 0) {
        throw std::invalid_argument("trajectory steps must be non-negative");
    }
}

TrajectoryStream simulate_kernel(long steps, std::uint64_t seed, const PJProfile& profile, LatticeSite start) {
    return TrajectoryStream(Engine::kernel, profile, steps, seed, start);
}

TrajectoryStream simulate_construction(long steps, std::uint64_t seed, LatticeSite start) {
    return TrajectoryStream(Engine::construction, PJProfile::hphc(), steps, seed, start);
}

}  // namespace hphc
