#pragma once

// Named unitary parameter families:
//   identity | minus-identity | phase:<beta> | phase-seq:pi-over-k
//   exp-hermitian:<seed>,<norm> | haar:<seed>
// beta accepts a decimal or a multiple of pi such as "pi/2", "-3pi/4", "0.5*pi".

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "random.hpp"

namespace saext {

enum class FamilyKind { identity, minus_identity, phase, pi_over_k, exp_hermitian, haar };

struct UnitaryFamily {
    FamilyKind kind = FamilyKind::identity;
    std::string spec;     // canonical text
    double beta = 0.0;
    std::uint64_t seed = 0;
    double norm = 0.0;

    bool block_diagonal() const { return kind != FamilyKind::exp_hermitian && kind != FamilyKind::haar; }

    ComplexMatrix build(std::size_t m) const {
        auto const n = static_cast<Eigen::Index>(m);
        ComplexMatrix u = ComplexMatrix::Identity(n, n);
        switch (kind) {
        case FamilyKind::identity: break;
        case FamilyKind::minus_identity: u *= -1.0; break;
        case FamilyKind::phase: u *= std::polar(1.0, beta); break;
        case FamilyKind::pi_over_k:
            for (Eigen::Index k = 0; k < n; ++k) u(k, k) = std::polar(1.0, pi / static_cast<double>(k + 1));
            break;
        case FamilyKind::exp_hermitian: {
            Rng rng(seed);
            u = unitary_exp(random_hermitian(rng, n, norm));
            break;
        }
        case FamilyKind::haar: {
            Rng rng(seed);
            u = haar_unitary(rng, n);
            break;
        }
        }
        return u;
    }
};

namespace detail {

inline bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    std::string const str(s);
    char* end = nullptr;
    out = std::strtod(str.c_str(), &end);
    return end == str.c_str() + str.size() && std::isfinite(out);
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
    auto const r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

/// decimal, or [sign][coef][*]pi[/den]
inline double parse_angle(std::string_view s) {
    double v = 0.0;
    if (parse_double(s, v)) return v;
    auto const p = s.find("pi");
    if (p == std::string_view::npos) throw ConfigError("unitary family: cannot parse angle '" + std::string(s) + "'");
    std::string_view head = s.substr(0, p);
    std::string_view const tail = s.substr(p + 2);
    double coef = 1.0;
    if (!head.empty() && head.back() == '*') head.remove_suffix(1);
    if (head == "-") coef = -1.0;
    else if (head == "+" || head.empty()) coef = 1.0;
    else if (!parse_double(head, coef)) throw ConfigError("unitary family: cannot parse angle '" + std::string(s) + "'");
    double den = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/' || !parse_double(tail.substr(1), den) || den == 0.0)
            throw ConfigError("unitary family: cannot parse angle '" + std::string(s) + "'");
    }
    return coef * pi / den;
}

} // namespace detail

inline UnitaryFamily parse_unitary_family(std::string const& text) {
    UnitaryFamily f;
    f.spec = text;
    auto const colon = text.find(':');
    std::string const head = text.substr(0, colon);
    std::string const arg = colon == std::string::npos ? std::string{} : text.substr(colon + 1);
    auto bad = [&](char const* why) { return ConfigError("unitary family '" + text + "': " + why); };

    if (head == "identity" || head == "minus-identity") {
        if (colon != std::string::npos) throw bad("takes no argument");
        f.kind = head == "identity" ? FamilyKind::identity : FamilyKind::minus_identity;
    } else if (head == "phase") {
        f.kind = FamilyKind::phase;
        f.beta = detail::parse_angle(arg);
    } else if (head == "phase-seq") {
        if (arg != "pi-over-k") throw bad("unknown rule (supported: pi-over-k)");
        f.kind = FamilyKind::pi_over_k;
    } else if (head == "exp-hermitian") {
        f.kind = FamilyKind::exp_hermitian;
        auto const comma = arg.find(',');
        if (comma == std::string::npos || !detail::parse_u64(arg.substr(0, comma), f.seed) ||
            !detail::parse_double(arg.substr(comma + 1), f.norm) || !(f.norm >= 0.0))
            throw bad("expected exp-hermitian:<seed>,<norm>");
    } else if (head == "haar") {
        f.kind = FamilyKind::haar;
        if (!detail::parse_u64(arg, f.seed)) throw bad("expected haar:<seed>");
    } else {
        throw bad("unknown family");
    }
    return f;
}

} // namespace saext
