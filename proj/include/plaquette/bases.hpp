#pragma once

// Measurement bases as first-class Kraus families. Each outcome maps the
// measured partons (dimension d^t) to r retained logical partons; rank-one
// destructive measurements have r = 0. Completeness sum_o K_o^dag K_o = 1
// is verified before any basis is used on a state.

#include <cstdint>
#include <random>

#include "plaquette/state.hpp"

namespace plaq {

struct outcome_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MeasurementRecord {
    std::vector<int> targets;
    std::string basis;
    std::vector<int> outcome;
};

struct KrausEntry {
    size_t out, in;
    cplx v;
};

struct BasisOutcome {
    std::vector<int> label;
    std::vector<KrausEntry> entries;
};

class MeasurementBasis {
public:
    MeasurementBasis(std::string name, int d, int t, int r, std::vector<BasisOutcome> outcomes)
        : name_(std::move(name)), d_(d), t_(t), r_(r), outcomes_(std::move(outcomes)) {}

    const std::string& name() const { return name_; }
    int d() const { return d_; }
    int inputs() const { return t_; }
    int retained() const { return r_; }
    const std::vector<BasisOutcome>& outcomes() const { return outcomes_; }

    size_t in_dim() const { return pow_dim(t_); }
    size_t out_dim() const { return pow_dim(r_); }

    // max |sum_o K_o^dag K_o - 1| entrywise
    double completeness_defect() const {
        const size_t n = in_dim();
        std::vector<cplx> acc(n * n, 0.0);
        for (const auto& o : outcomes_)
            for (const auto& e1 : o.entries)
                for (const auto& e2 : o.entries)
                    if (e1.out == e2.out) acc[e1.in * n + e2.in] += std::conj(e1.v) * e2.v;
        double defect = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                defect = std::max(defect, std::abs(acc[i * n + j] - cplx(i == j ? 1.0 : 0.0)));
        return defect;
    }

    void require_complete() const {
        const double defect = completeness_defect();
        if (defect > kOpTol)
            throw std::invalid_argument("basis '" + name_ + "' is not complete (defect " +
                                        std::to_string(defect) + ")");
    }

private:
    size_t pow_dim(int k) const {
        size_t n = 1;
        for (int i = 0; i < k; ++i) n *= static_cast<size_t>(d_);
        return n;
    }

    std::string name_;
    int d_, t_, r_;
    std::vector<BasisOutcome> outcomes_;
};

struct MeasureBranch {
    MeasurementRecord record;
    SparseState state;
    double probability;
};

// All outcome branches with nonzero probability; post-states renormalized.
// Measured partons leave the state; retained logical partons get the ids in
// `out_ids`.
inline std::vector<MeasureBranch> measure_all(const SparseState& s, const std::vector<int>& targets,
                                              const MeasurementBasis& basis,
                                              const std::vector<int>& out_ids = {}) {
    if (static_cast<int>(targets.size()) != basis.inputs())
        throw std::invalid_argument("measure: target count does not match basis");
    if (static_cast<int>(out_ids.size()) != basis.retained())
        throw std::invalid_argument("measure: retained parton ids do not match basis");
    basis.require_complete();

    const int d = s.d();
    std::vector<int> tpos;
    for (int t : targets) tpos.push_back(s.parton_index(t));

    std::vector<int> rest;
    for (int p : s.partons())
        if (std::find(targets.begin(), targets.end(), p) == targets.end()) rest.push_back(p);
    std::vector<int> new_partons = rest;
    for (int p : out_ids) {
        if (std::find(new_partons.begin(), new_partons.end(), p) != new_partons.end())
            throw std::invalid_argument("measure: output parton id already present");
        new_partons.push_back(p);
    }

    SparseState proto(d, new_partons);
    std::vector<int> rest_pos_old, rest_pos_new;
    for (int p : rest) {
        rest_pos_old.push_back(s.parton_index(p));
        rest_pos_new.push_back(proto.parton_index(p));
    }
    std::vector<int> out_pos;
    for (int p : out_ids) out_pos.push_back(proto.parton_index(p));

    std::vector<MeasureBranch> branches;
    for (const auto& o : basis.outcomes()) {
        SparseState post = proto;
        auto& dst = post.amps();
        for (const auto& [key, amp] : s.amps()) {
            size_t in = 0;
            for (int p : tpos) in = in * static_cast<size_t>(d) + static_cast<size_t>(key[static_cast<size_t>(p)]);
            for (const auto& e : o.entries) {
                if (e.in != in) continue;
                std::string nk(new_partons.size(), '\0');
                for (size_t i = 0; i < rest.size(); ++i)
                    nk[static_cast<size_t>(rest_pos_new[i])] = key[static_cast<size_t>(rest_pos_old[i])];
                size_t restv = e.out;
                for (size_t i = out_pos.size(); i-- > 0;) {
                    nk[static_cast<size_t>(out_pos[i])] = static_cast<char>(restv % static_cast<size_t>(d));
                    restv /= static_cast<size_t>(d);
                }
                dst[nk] += amp * e.v;
            }
        }
        post.prune();
        const double p = post.norm2();
        if (p < kAmpPrune) continue;
        post.scale(1.0 / std::sqrt(p));
        branches.push_back({{targets, basis.name(), o.label}, std::move(post), p});
    }
    return branches;
}

inline MeasureBranch measure_forced(const SparseState& s, const std::vector<int>& targets,
                                    const MeasurementBasis& basis, const std::vector<int>& outcome,
                                    const std::vector<int>& out_ids = {}) {
    auto branches = measure_all(s, targets, basis, out_ids);
    for (auto& b : branches)
        if (b.record.outcome == outcome) return std::move(b);
    throw outcome_error("forced outcome has zero probability");
}

inline MeasureBranch measure_sampled(const SparseState& s, const std::vector<int>& targets,
                                     const MeasurementBasis& basis, std::mt19937_64& rng,
                                     const std::vector<int>& out_ids = {}) {
    auto branches = measure_all(s, targets, basis, out_ids);
    double total = 0;
    for (const auto& b : branches) total += b.probability;
    std::uniform_real_distribution<double> dist(0.0, total);
    double r = dist(rng);
    for (auto& b : branches) {
        r -= b.probability;
        if (r <= 0) return std::move(b);
    }
    return std::move(branches.back());
}

// ---- the shipped bases ----

// eigenbasis Z^m |+>, outcomes m
inline MeasurementBasis basis_x_tilde(int d) {
    std::vector<BasisOutcome> outs;
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int m = 0; m < d; ++m) {
        BasisOutcome o;
        o.label = {m};
        for (int j = 0; j < d; ++j)
            o.entries.push_back({0, static_cast<size_t>(j),
                                 s * omega_root(d, -static_cast<long long>(j) * m)});
        outs.push_back(std::move(o));
    }
    return {"x_tilde", d, 1, 0, std::move(outs)};
}

inline MeasurementBasis basis_computational(int d) {
    std::vector<BasisOutcome> outs;
    for (int m = 0; m < d; ++m) outs.push_back({{m}, {{0, static_cast<size_t>(m), 1.0}}});
    return {"computational", d, 1, 0, std::move(outs)};
}

// generalized Bell basis (Z^a X^b (x) 1) sum_j |jj> / sqrt(d), outcomes (a,b)
inline MeasurementBasis basis_bell(int d) {
    std::vector<BasisOutcome> outs;
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            BasisOutcome o;
            o.label = {a, b};
            for (int j = 0; j < d; ++j) {
                const size_t in = static_cast<size_t>(((j + b) % d) * d + j);
                o.entries.push_back({0, in, s * omega_root(d, -static_cast<long long>(a) * ((j + b) % d))});
            }
            outs.push_back(std::move(o));
        }
    return {"bell", d, 2, 0, std::move(outs)};
}

// twisted Bell basis |N(r,s)> = (U^dag X^r Z^s (x) 1)|B>, outcomes (r,s)
inline MeasurementBasis basis_twisted_n(int d, const std::vector<cplx>& u_matrix) {
    const size_t n = static_cast<size_t>(d);
    if (u_matrix.size() != n * n) throw std::invalid_argument("twisted_n: U must be d x d");
    std::vector<BasisOutcome> outs;
    const double sc = 1.0 / std::sqrt(static_cast<double>(d));
    for (int r = 0; r < d; ++r)
        for (int s = 0; s < d; ++s) {
            // A = U^dag X^r Z^s;  A[u][j] = conj(U[(j+r)%d][u]) * w^{js}
            BasisOutcome o;
            o.label = {r, s};
            for (int u = 0; u < d; ++u)
                for (int j = 0; j < d; ++j) {
                    const cplx a = std::conj(u_matrix[static_cast<size_t>((j + r) % d) * n +
                                                      static_cast<size_t>(u)]) *
                                   omega_root(d, static_cast<long long>(j) * s);
                    if (std::abs(a) < kAmpPrune) continue;
                    o.entries.push_back({0, static_cast<size_t>(u * d + j), sc * std::conj(a)});
                }
            outs.push_back(std::move(o));
        }
    return {"twisted_N", d, 2, 0, std::move(outs)};
}

// |O(r,s,t)> = (1 (x) F^dag (x) 1)(X^r (x) Z^s (x) X^t) sum_j |jjj> / sqrt(d)
inline MeasurementBasis basis_twisted_o(int d) {
    std::vector<BasisOutcome> outs;
    const double sc = 1.0 / static_cast<double>(d);  // 1/sqrt(d) GHZ * 1/sqrt(d) Fourier
    for (int r = 0; r < d; ++r)
        for (int s = 0; s < d; ++s)
            for (int t = 0; t < d; ++t) {
                BasisOutcome o;
                o.label = {r, s, t};
                for (int j = 0; j < d; ++j)
                    for (int c = 0; c < d; ++c) {
                        const cplx v = sc * omega_root(d, static_cast<long long>(j) * s -
                                                              static_cast<long long>(j) * c);
                        const size_t in = static_cast<size_t>((((j + r) % d) * d + c) * d + (j + t) % d);
                        o.entries.push_back({0, in, std::conj(v)});
                    }
                outs.push_back(std::move(o));
            }
    return {"twisted_O", d, 3, 0, std::move(outs)};
}

// |W(u,v,w)> = (X^u (x) Z^v (x) X^w) sum_j |jjj> / sqrt(d)
inline MeasurementBasis basis_twisted_w(int d) {
    std::vector<BasisOutcome> outs;
    const double sc = 1.0 / std::sqrt(static_cast<double>(d));
    for (int u = 0; u < d; ++u)
        for (int v = 0; v < d; ++v)
            for (int w = 0; w < d; ++w) {
                BasisOutcome o;
                o.label = {u, v, w};
                for (int j = 0; j < d; ++j) {
                    const cplx val = sc * omega_root(d, static_cast<long long>(j) * v);
                    const size_t in = static_cast<size_t>((((j + u) % d) * d + j) * d + (j + w) % d);
                    o.entries.push_back({0, in, std::conj(val)});
                }
                outs.push_back(std::move(o));
            }
    return {"twisted_W", d, 3, 0, std::move(outs)};
}

// logical projection (sum_j |j><j...j|) X_1^{m_1} ... X_{k-1}^{m_{k-1}}:
// k measured partons collapse to one logical qudit, outcomes (m_1..m_{k-1})
inline MeasurementBasis basis_logical_projection(int d, int k) {
    if (k < 1) throw std::invalid_argument("logical_projection: k must be >= 1");
    std::vector<BasisOutcome> outs;
    std::vector<int> m(static_cast<size_t>(k - 1), 0);
    while (true) {
        BasisOutcome o;
        o.label = m;
        for (int j = 0; j < d; ++j) {
            size_t in = 0;
            for (int i = 0; i < k - 1; ++i)
                in = in * static_cast<size_t>(d) +
                     static_cast<size_t>(((j - m[static_cast<size_t>(i)]) % d + d) % d);
            in = in * static_cast<size_t>(d) + static_cast<size_t>(j);
            o.entries.push_back({static_cast<size_t>(j), in, 1.0});
        }
        outs.push_back(std::move(o));
        int i = 0;
        for (; i < k - 1; ++i) {
            if (++m[static_cast<size_t>(i)] < d) break;
            m[static_cast<size_t>(i)] = 0;
        }
        if (i == k - 1) break;
    }
    return {"logical_projection", d, k, 1, std::move(outs)};
}

}  // namespace plaq
