#include "hphc/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace hphc {

namespace {

const Rational kQuarter(1, 4);
const Rational kHalf(1, 2);

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

long parse_long(const std::string& s) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    if (used != s.size()) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    return v;
}

}  // namespace

std::string to_string(const LatticeSite& site) {
    return std::to_string(site.k) + "," + std::to_string(site.j);
}

LatticeSite parse_site(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw std::invalid_argument("site must be 'k,j': '" + std::string(text) + "'");
    }
    return LatticeSite{parse_long(parts[0]), parse_long(parts[1])};
}

PJProfile PJProfile::simple() {
    PJProfile p;
    p.kind_ = ProfileKind::simple;
    p.values_ = {kQuarter};
    return p;
}

PJProfile PJProfile::comb() {
    PJProfile p;
    p.kind_ = ProfileKind::comb;
    return p;
}

PJProfile PJProfile::hphc() {
    PJProfile p;
    p.kind_ = ProfileKind::hphc;
    return p;
}

PJProfile PJProfile::periodic(std::vector<Rational> values) {
    if (values.empty()) {
        throw std::invalid_argument("periodic profile needs at least one value");
    }
    PJProfile p;
    p.kind_ = ProfileKind::periodic;
    p.values_ = std::move(values);
    for (auto& v : p.values_) {
        v.canonicalize();
        p.periodic_double_.push_back(v.get_d());
    }
    p.validate();
    return p;
}

PJProfile PJProfile::custom(Rational fallback, std::map<long, Rational> overrides) {
    PJProfile p;
    p.kind_ = ProfileKind::custom;
    p.fallback_ = std::move(fallback);
    p.fallback_.canonicalize();
    p.fallback_double_ = p.fallback_.get_d();
    p.overrides_ = std::move(overrides);
    for (auto& [row, v] : p.overrides_) {
        v.canonicalize();
        p.overrides_double_[row] = v.get_d();
    }
    p.validate();
    return p;
}

void PJProfile::validate() const {
    std::vector<const Rational*> all;
    if (kind_ == ProfileKind::periodic) {
        for (const auto& v : values_) all.push_back(&v);
    } else if (kind_ == ProfileKind::custom) {
        all.push_back(&fallback_);
        for (const auto& [row, v] : overrides_) all.push_back(&v);
    }
    bool below_half = false;
    for (const Rational* v : all) {
        if (*v <= 0 || *v > kHalf) {
            throw std::invalid_argument("profile value " + v->get_str() + " outside (0, 1/2]");
        }
        below_half = below_half || *v < kHalf;
    }
    if (!all.empty() && !below_half) {
        throw std::invalid_argument("profile needs some p_j < 1/2");
    }
}

const Rational& PJProfile::p(long j) const {
    switch (kind_) {
        case ProfileKind::simple: return kQuarter;
        case ProfileKind::comb: return j == 0 ? kQuarter : kHalf;
        case ProfileKind::hphc: return j >= 0 ? kQuarter : kHalf;
        case ProfileKind::periodic: return values_[floor_mod(j)];
        case ProfileKind::custom: break;
    }
    const auto it = overrides_.find(j);
    return it == overrides_.end() ? fallback_ : it->second;
}

double PJProfile::custom_double(long j) const {
    const auto it = overrides_double_.find(j);
    return it == overrides_double_.end() ? fallback_double_ : it->second;
}

PJProfile PJProfile::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string head(text.substr(0, colon));
    const std::string body = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
    if (head == "simple" || head == "comb" || head == "hphc") {
        if (!body.empty()) {
            throw std::invalid_argument("profile '" + head + "' takes no parameters");
        }
        return head == "simple" ? simple() : head == "comb" ? comb() : hphc();
    }
    if (head == "periodic") {
        std::vector<Rational> values;
        for (const auto& part : split(body, ',')) {
            values.push_back(parse_rational(part));
        }
        return periodic(std::move(values));
    }
    if (head == "custom") {
        const auto semi = body.find(';');
        Rational fallback = parse_rational(body.substr(0, semi));
        std::map<long, Rational> overrides;
        if (semi != std::string::npos && semi + 1 < body.size()) {
            for (const auto& pair : split(body.substr(semi + 1), ',')) {
                const auto eq = pair.find('=');
                if (eq == std::string::npos) {
                    throw std::invalid_argument("custom profile entry must be row=value: '" + pair + "'");
                }
                overrides[parse_long(pair.substr(0, eq))] = parse_rational(pair.substr(eq + 1));
            }
        }
        return custom(std::move(fallback), std::move(overrides));
    }
    throw std::invalid_argument("unknown profile '" + std::string(text) + "'");
}

std::string PJProfile::to_string() const {
    switch (kind_) {
        case ProfileKind::simple: return "simple";
        case ProfileKind::comb: return "comb";
        case ProfileKind::hphc: return "hphc";
        case ProfileKind::periodic: {
            std::string out = "periodic:";
            for (std::size_t i = 0; i < values_.size(); ++i) {
                out += (i ? "," : "") + values_[i].get_str();
            }
            return out;
        }
        case ProfileKind::custom: break;
    }
    std::string out = "custom:" + fallback_.get_str();
    bool first = true;
    for (const auto& [row, v] : overrides_) {
        out += (first ? ";" : ",") + std::to_string(row) + "=" + v.get_str();
        first = false;
    }
    return out;
}

Rational invariant_weight(const PJProfile& profile, long j) {
    Rational w = 1 / profile.p(j);
    w.canonicalize();
    return w;
}

}  // namespace hphc
