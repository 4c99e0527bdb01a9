#pragma once

// Exact 3-cocycle / 3-cochain machinery over finite abelian groups:
// the standard Z_d cocycle family, the five-term cocycle condition,
// inhomogeneous <-> homogeneous conversion, coboundaries, and a
// coboundary-invariant class certificate for cyclic groups.

#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "plaquette/group.hpp"
#include "plaquette/phase.hpp"

namespace plaq {

// Inhomogeneous 3-cocycle: tabulated map G^3 -> U(1).
struct Cocycle3 {
    GroupSpec spec;
    std::vector<PhaseExponent> table;  // index g1*n^2 + g2*n + g3
    std::optional<int> label_c;

    Cocycle3(GroupSpec s, std::vector<PhaseExponent> t, std::optional<int> c = std::nullopt)
        : spec(std::move(s)), table(std::move(t)), label_c(c) {
        const size_t n = static_cast<size_t>(spec.order());
        if (table.size() != n * n * n) throw structural_error("Cocycle3: table must cover G^3");
    }

    const PhaseExponent& at(int g1, int g2, int g3) const {
        const int n = spec.order();
        return table[static_cast<size_t>((g1 * n + g2) * n + g3)];
    }
    PhaseExponent& at(int g1, int g2, int g3) {
        const int n = spec.order();
        return table[static_cast<size_t>((g1 * n + g2) * n + g3)];
    }
};

// Homogeneous 3-cochain: tabulated map G^4 -> U(1) with
// nu(g h0, g h1, g h2, g h3) = nu(h0, h1, h2, h3).
struct Cochain3 {
    GroupSpec spec;
    std::vector<PhaseExponent> table;  // index ((g0*n+g1)*n+g2)*n+g3

    Cochain3(GroupSpec s, std::vector<PhaseExponent> t) : spec(std::move(s)), table(std::move(t)) {
        const size_t n = static_cast<size_t>(spec.order());
        if (table.size() != n * n * n * n) throw structural_error("Cochain3: table must cover G^4");
    }

    const PhaseExponent& at(int g0, int g1, int g2, int g3) const {
        const int n = spec.order();
        return table[static_cast<size_t>(((g0 * n + g1) * n + g2) * n + g3)];
    }
};

// Inhomogeneous 2-cochain: tabulated map G^2 -> U(1).
struct TwoCochain {
    GroupSpec spec;
    std::vector<PhaseExponent> table;  // index g1*n + g2

    TwoCochain(GroupSpec s, std::vector<PhaseExponent> t) : spec(std::move(s)), table(std::move(t)) {
        const size_t n = static_cast<size_t>(spec.order());
        if (table.size() != n * n) throw structural_error("TwoCochain: table must cover G^2");
    }

    const PhaseExponent& at(int g1, int g2) const {
        return table[static_cast<size_t>(g1 * spec.order() + g2)];
    }
};

struct CocycleReport {
    bool pass = true;
    std::array<int, 4> violating_tuple{};  // element indices, valid when !pass
    PhaseExponent violation;               // value of the five-term product there
};

// omega3(g1,g2,g3) = exp(2 pi i c [g1]([g2]+[g3]-[g2+g3]) / d^2) on Z_d.
inline Cocycle3 standard_cocycle(const GroupSpec& spec, int c) {
    if (!spec.cyclic())
        throw std::invalid_argument("standard_cocycle: only cyclic groups are supported");
    const int d = spec.order();
    if (c < 0 || c >= d) throw std::invalid_argument("standard_cocycle: require 0 <= c < d");
    const std::int64_t order = static_cast<std::int64_t>(d) * d;
    std::vector<PhaseExponent> table;
    table.reserve(static_cast<size_t>(d) * d * d);
    for (int g1 = 0; g1 < d; ++g1)
        for (int g2 = 0; g2 < d; ++g2)
            for (int g3 = 0; g3 < d; ++g3) {
                const std::int64_t carry = g2 + g3 - (g2 + g3) % d;  // 0 or d
                table.emplace_back(static_cast<std::int64_t>(c) * g1 * carry, order);
            }
    return Cocycle3(spec, std::move(table), c);
}

inline Cocycle3 trivial_cocycle(const GroupSpec& spec) {
    const size_t n = static_cast<size_t>(spec.order());
    return Cocycle3(spec, std::vector<PhaseExponent>(n * n * n), 0);
}

// Five-term condition: w(g2,g3,g4) w(g1,g2g3,g4) w(g1,g2,g3)
//                    / [w(g1g2,g3,g4) w(g1,g2,g3g4)] = 1 for all tuples.
inline CocycleReport check_cocycle_condition(const Cocycle3& w) {
    const GroupSpec& G = w.spec;
    const int n = G.order();
    for (int g1 = 0; g1 < n; ++g1)
        for (int g2 = 0; g2 < n; ++g2) {
            const int g12 = G.mul_index(g1, g2);
            for (int g3 = 0; g3 < n; ++g3) {
                const int g23 = G.mul_index(g2, g3);
                for (int g4 = 0; g4 < n; ++g4) {
                    const int g34 = G.mul_index(g3, g4);
                    PhaseExponent p = w.at(g2, g3, g4) * w.at(g1, g23, g4) * w.at(g1, g2, g3) *
                                      w.at(g12, g3, g4).inverse() * w.at(g1, g2, g34).inverse();
                    if (!p.is_one()) return {false, {g1, g2, g3, g4}, p};
                }
            }
        }
    return {};
}

// nu3(g0,g1,g2,g3) = w(g0^-1 g1, g1^-1 g2, g2^-1 g3); homogeneous by construction.
inline Cochain3 cocycle_to_cochain(const Cocycle3& w) {
    auto rep = check_cocycle_condition(w);
    if (!rep.pass) throw structural_error("cocycle_to_cochain: input fails the cocycle condition");
    const GroupSpec& G = w.spec;
    const int n = G.order();
    std::vector<PhaseExponent> table(static_cast<size_t>(n) * n * n * n);
    for (int g0 = 0; g0 < n; ++g0)
        for (int g1 = 0; g1 < n; ++g1) {
            const int a = G.mul_index(G.inv_index(g0), g1);
            for (int g2 = 0; g2 < n; ++g2) {
                const int b = G.mul_index(G.inv_index(g1), g2);
                for (int g3 = 0; g3 < n; ++g3) {
                    const int c = G.mul_index(G.inv_index(g2), g3);
                    table[static_cast<size_t>(((g0 * n + g1) * n + g2) * n + g3)] = w.at(a, b, c);
                }
            }
        }
    return Cochain3(G, std::move(table));
}

// Cochain form of the cocycle condition:
// nu(g1,g2,g3,g4) nu(g0,g1,g3,g4) nu(g0,g1,g2,g3) / [nu(g0,g2,g3,g4) nu(g0,g1,g2,g4)] = 1.
inline bool check_cochain_condition(const Cochain3& nu) {
    const int n = nu.spec.order();
    for (int g0 = 0; g0 < n; ++g0)
        for (int g1 = 0; g1 < n; ++g1)
            for (int g2 = 0; g2 < n; ++g2)
                for (int g3 = 0; g3 < n; ++g3)
                    for (int g4 = 0; g4 < n; ++g4) {
                        PhaseExponent p = nu.at(g1, g2, g3, g4) * nu.at(g0, g1, g3, g4) *
                                          nu.at(g0, g1, g2, g3) * nu.at(g0, g2, g3, g4).inverse() *
                                          nu.at(g0, g1, g2, g4).inverse();
                        if (!p.is_one()) return false;
                    }
    return true;
}

inline bool check_homogeneity(const Cochain3& nu) {
    const GroupSpec& G = nu.spec;
    const int n = G.order();
    for (int g = 0; g < n; ++g)
        for (int g0 = 0; g0 < n; ++g0)
            for (int g1 = 0; g1 < n; ++g1)
                for (int g2 = 0; g2 < n; ++g2)
                    for (int g3 = 0; g3 < n; ++g3)
                        if (nu.at(G.mul_index(g, g0), G.mul_index(g, g1), G.mul_index(g, g2),
                                  G.mul_index(g, g3)) != nu.at(g0, g1, g2, g3))
                            return false;
    return true;
}

// Homogeneous 2-cochain induced by an inhomogeneous mu: nu2(a,b,c) = mu(a^-1 b, b^-1 c).
// Coboundary via the alternating-face formula:
// lambda3(g0,g1,g2,g3) = nu2(g1,g2,g3) nu2(g0,g1,g3) / [nu2(g0,g2,g3) nu2(g0,g1,g2)].
inline Cochain3 coboundary(const TwoCochain& mu) {
    const GroupSpec& G = mu.spec;
    const int n = G.order();
    auto nu2 = [&](int a, int b, int c) {
        return mu.at(G.mul_index(G.inv_index(a), b), G.mul_index(G.inv_index(b), c));
    };
    std::vector<PhaseExponent> table(static_cast<size_t>(n) * n * n * n);
    for (int g0 = 0; g0 < n; ++g0)
        for (int g1 = 0; g1 < n; ++g1)
            for (int g2 = 0; g2 < n; ++g2)
                for (int g3 = 0; g3 < n; ++g3)
                    table[static_cast<size_t>(((g0 * n + g1) * n + g2) * n + g3)] =
                        nu2(g1, g2, g3) * nu2(g0, g1, g3) * nu2(g0, g2, g3).inverse() *
                        nu2(g0, g1, g2).inverse();
    return Cochain3(G, std::move(table));
}

// Same coboundary as an inhomogeneous cocycle:
// (d mu)(g1,g2,g3) = mu(g2,g3) mu(g1,g2g3) / [mu(g1g2,g3) mu(g1,g2)].
inline Cocycle3 coboundary_cocycle(const TwoCochain& mu) {
    const GroupSpec& G = mu.spec;
    const int n = G.order();
    std::vector<PhaseExponent> table(static_cast<size_t>(n) * n * n);
    for (int g1 = 0; g1 < n; ++g1)
        for (int g2 = 0; g2 < n; ++g2)
            for (int g3 = 0; g3 < n; ++g3)
                table[static_cast<size_t>((g1 * n + g2) * n + g3)] =
                    mu.at(g2, g3) * mu.at(g1, G.mul_index(g2, g3)) *
                    mu.at(G.mul_index(g1, g2), g3).inverse() * mu.at(g1, g2).inverse();
    return Cocycle3(G, std::move(table));
}

inline Cocycle3 multiply(const Cocycle3& a, const Cocycle3& b) {
    if (a.spec != b.spec) throw std::invalid_argument("multiply: cocycles on different groups");
    std::vector<PhaseExponent> table(a.table.size());
    for (size_t i = 0; i < table.size(); ++i) table[i] = a.table[i] * b.table[i];
    return Cocycle3(a.spec, std::move(table));
}

// mu_2 drawn uniformly from the given roots of unity; exercises coboundary invariance.
inline TwoCochain random_two_cochain(const GroupSpec& spec, std::int64_t root_order,
                                     std::mt19937_64& rng) {
    const size_t n = static_cast<size_t>(spec.order());
    std::uniform_int_distribution<std::int64_t> dist(0, root_order - 1);
    std::vector<PhaseExponent> table;
    table.reserve(n * n);
    for (size_t i = 0; i < n * n; ++i) table.emplace_back(dist(rng), root_order);
    return TwoCochain(spec, std::move(table));
}

// Certificate prod_{k=0}^{d-1} w(g, g^k, g) for a generator g of a cyclic group.
// Multiplying w by any coboundary telescopes away, so the value only depends on
// the cohomology class; for the standard family it equals exp(2 pi i c / d) at g = 1.
inline PhaseExponent class_invariant(const Cocycle3& w, const GroupElement& g) {
    const GroupSpec& G = w.spec;
    if (!G.cyclic()) throw std::invalid_argument("class_invariant: group must be cyclic");
    if (!G.is_generator(g)) throw std::invalid_argument("class_invariant: g must be a generator");
    const int gi = G.index_of(g);
    PhaseExponent p;
    int gk = G.index_of(G.identity());
    for (int k = 0; k < G.order(); ++k) {
        p *= w.at(gi, gk, gi);
        gk = G.mul_index(gk, gi);
    }
    return p;
}

}  // namespace plaq
