#pragma once

// Simulation of anisotropic planar walks.
//
// Two engines produce the half-plane half-comb walk: the generic per-row
// transition kernel, and the original interlacing construction from two
// independent 1D simple walks plus geometric horizontal run lengths.

#include "hphc/lattice.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace hphc {

/// Stream-split rule: replica r of a master seed gets splitmix64's (r+1)-th output.
std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t replica);

/// Seeded 64-bit random stream. Uniform variates are built from raw bits so
/// the sequence is identical across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
    static RandomStream for_replica(std::uint64_t master_seed, std::uint64_t replica) {
        return RandomStream(split_seed(master_seed, replica));
    }

    std::uint64_t bits() { return engine_(); }
    /// Uniform on {0, 1, ..., 2^53 - 1} * 2^-53.
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
    /// Uniform on {1, ..., 2^53} * 2^-53.
    double uniform_pos() { return static_cast<double>((bits() >> 11) + 1) * 0x1.0p-53; }
    bool coin() {
        if (coin_left_ == 0) {
            coin_bits_ = bits();
            coin_left_ = 64;
        }
        const bool heads = coin_bits_ & 1u;
        coin_bits_ >>= 1;
        --coin_left_;
        return heads;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t coin_bits_ = 0;
    int coin_left_ = 0;
};

/// Geometric run length, P(Y = k) = 2^{-(k+1)}, by inverse CDF of one uniform.
long sample_geometric(RandomStream& rng);

/// U_K: sum of K independent geometric run lengths.
long sample_negbin(long K, RandomStream& rng);
long sample_negbin(long K, std::uint64_t seed);

/// The four neighbours of a site and their transition probabilities
/// (right, left, up, down).
struct KernelStep {
    std::array<std::pair<LatticeSite, Rational>, 4> moves;
};
KernelStep step_kernel(const LatticeSite& site, const PJProfile& profile);

class KernelWalk {
public:
    KernelWalk(PJProfile profile, RandomStream rng, LatticeSite start = {})
        : profile_(std::move(profile)), rng_(std::move(rng)), site_(start) {}

    const LatticeSite& site() const { return site_; }

    const LatticeSite& step() {
        const double p = profile_.p_double(site_.j);
        const double u = rng_.uniform();
        if (u < p) {
            ++site_.j;
        } else if (u < 2.0 * p) {
            --site_.j;
        } else if (u < p + 0.5) {
            ++site_.k;
        } else {
            --site_.k;
        }
        return site_;
    }

private:
    PJProfile profile_;
    RandomStream rng_;
    LatticeSite site_;
};

struct ConstructionState {
    LatticeSite site;
    long s1_index = 0;            // horizontal steps consumed from S1
    long s2_index = 0;            // vertical steps consumed from S2
    long pending_horizontal = 0;  // moves left in the current geometric run
    long geometric_index = 0;     // geometric run lengths drawn so far
};

/// Half-plane half-comb walk built from two independent 1D simple walks:
/// whenever the walk stands on a row j >= 0 after a vertical step (or at the
/// start), it takes a geometric number of horizontal steps from S1, then one
/// vertical step from S2; below the axis it only takes vertical steps.
class ConstructionWalk {
public:
    explicit ConstructionWalk(RandomStream rng, LatticeSite start = {});

    const LatticeSite& site() const { return state_.site; }
    const ConstructionState& state() const { return state_; }
    /// Length of the most recently drawn geometric run.
    long last_run_length() const { return last_run_; }

    const LatticeSite& step() {
        if (state_.pending_horizontal > 0) {
            state_.site.k += rng_.coin() ? 1 : -1;
            ++state_.s1_index;
            --state_.pending_horizontal;
            return state_.site;
        }
        state_.site.j += rng_.coin() ? 1 : -1;
        ++state_.s2_index;
        if (state_.site.j >= 0) {
            draw_run();
        }
        return state_.site;
    }

private:
    void draw_run() {
        last_run_ = sample_geometric(rng_);
        state_.pending_horizontal = last_run_;
        ++state_.geometric_index;
    }

    RandomStream rng_;
    ConstructionState state_;
    long last_run_ = -1;
};

enum class Engine { kernel, construction };
std::string to_string(Engine engine);
Engine parse_engine(std::string_view text);

/// Lazily generated trajectory C(0), C(1), ..., C(steps); single consumer.
class TrajectoryStream {
public:
    TrajectoryStream(Engine engine, const PJProfile& profile, long steps, std::uint64_t seed,
                     LatticeSite start = {});

    long steps() const { return steps_; }
    std::uint64_t seed() const { return seed_; }
    Engine engine() const { return engine_; }

    /// Writes the next site; false once all steps + 1 sites were produced.
    bool next(LatticeSite& out) {
        if (emitted_ > steps_) {
            return false;
        }
        out = emitted_++ == 0 ? start_ : std::visit([](auto& w) { return w.step(); }, walk_);
        return true;
    }

    /// Calls f(site) for every remaining site without per-step dispatch.
    template <class F>
    void for_each(F&& f) {
        if (emitted_ == 0) {
            f(start_);
            ++emitted_;
        }
        std::visit(
            [&](auto& w) {
                for (; emitted_ <= steps_; ++emitted_) {
                    f(w.step());
                }
            },
            walk_);
    }

private:
    Engine engine_;
    long steps_;
    std::uint64_t seed_;
    LatticeSite start_;
    long emitted_ = 0;
    std::variant<KernelWalk, ConstructionWalk> walk_;
};

TrajectoryStream simulate_kernel(long steps, std::uint64_t seed, const PJProfile& profile,
                                 LatticeSite start = {});
TrajectoryStream simulate_construction(long steps, std::uint64_t seed, LatticeSite start = {});

}  // namespace hphc
