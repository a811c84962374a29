#pragma once

#include "hphc/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hphc {

struct LatticeSite {
    long k = 0;  // horizontal
    long j = 0;  // vertical (row)

    friend auto operator<=>(const LatticeSite&, const LatticeSite&) = default;
};

std::string to_string(const LatticeSite& site);
/// Parses "k,j".
LatticeSite parse_site(std::string_view text);

struct LatticeSiteHash {
    std::size_t operator()(const LatticeSite& s) const noexcept {
        const auto a = static_cast<std::uint64_t>(s.k) * 0x9E3779B97F4A7C15ULL;
        const auto b = static_cast<std::uint64_t>(s.j) + 0x632BE59BD9B4E019ULL;
        return static_cast<std::size_t>(a ^ (b + (a << 6) + (a >> 2)));
    }
};

enum class ProfileKind { simple, comb, hphc, periodic, custom };

/// Row-dependent vertical step probability j -> p_j of an anisotropic walk.
///
/// From row j the walk moves up or down with probability p_j each and left
/// or right with probability 1/2 - p_j each. Every p_j lies in (0, 1/2] and
/// at least one is below 1/2.
class PJProfile {
public:
    static PJProfile simple();
    static PJProfile comb();
    static PJProfile hphc();
    /// p_j = values[j mod L].
    static PJProfile periodic(std::vector<Rational> values);
    static PJProfile custom(Rational fallback, std::map<long, Rational> overrides);

    /// Accepts "simple", "comb", "hphc", "periodic:1/4,1/3" or
    /// "custom:1/2;0=1/4,3=1/3" (default first, then row=value pairs).
    static PJProfile parse(std::string_view text);
    std::string to_string() const;

    ProfileKind kind() const { return kind_; }
    const Rational& p(long j) const;
    double p_double(long j) const {
        switch (kind_) {
            case ProfileKind::simple: return 0.25;
            case ProfileKind::comb: return j == 0 ? 0.25 : 0.5;
            case ProfileKind::hphc: return j >= 0 ? 0.25 : 0.5;
            case ProfileKind::periodic: return periodic_double_[floor_mod(j)];
            case ProfileKind::custom: break;
        }
        return custom_double(j);
    }

    /// Period length for periodic profiles (1 for simple).
    std::size_t period() const { return values_.size(); }
    const std::vector<Rational>& periodic_values() const { return values_; }

    friend bool operator==(const PJProfile& a, const PJProfile& b) {
        return a.to_string() == b.to_string();
    }

private:
    PJProfile() = default;
    void validate() const;
    std::size_t floor_mod(long j) const {
        const long L = static_cast<long>(values_.size());
        const long m = j % L;
        return static_cast<std::size_t>(m < 0 ? m + L : m);
    }
    double custom_double(long j) const;

    ProfileKind kind_ = ProfileKind::simple;
    std::vector<Rational> values_;  // periodic values (also simple: {1/4})
    std::vector<double> periodic_double_;
    Rational fallback_;
    std::map<long, Rational> overrides_;
    std::map<long, double> overrides_double_;
    double fallback_double_ = 0.25;
};

/// 1 / p_j, the invariant measure of the anisotropic kernel at any (k, j).
Rational invariant_weight(const PJProfile& profile, long j);

}  // namespace hphc
