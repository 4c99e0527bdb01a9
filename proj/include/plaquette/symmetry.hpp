#pragma once

// On-site symmetry representation built from a 3-cochain and a branching
// assignment: digit shift alpha -> g.alpha composed with the exact phase
//   f3 = prod_{i in i_a} nu3(a_i, a_{i+1}, g^-1 gbar, gbar)
//      / prod_{i in i_b} nu3(a_{i+1}, a_i, g^-1 gbar, gbar),
// cyclic index convention a_{k*+1} = a_1. Verification is exact: phases stay
// integer exponents end to end.

#include <functional>
#include <optional>

#include "plaquette/builtins.hpp"
#include "plaquette/cocycle.hpp"
#include "plaquette/state.hpp"

namespace plaq {

class SiteSymmetryOp {
public:
    SiteSymmetryOp(const Cochain3& nu, const BranchingAssignment& br, const Lattice& l, int site,
                   const GroupElement& g, const GroupElement& gbar)
        : spec_(nu.spec), site_(site), g_(g), gbar_(gbar) {
        const GroupSpec& G = spec_;
        k_ = l.k_star(site);
        partons_ = l.site(site).partons;
        const int gi = G.index_of(g);
        const int gbi = G.index_of(gbar);
        ginv_gbar_ = G.mul_index(G.inv_index(gi), gbi);
        gbar_idx_ = gbi;
        g_idx_ = gi;
        for (int pair0 = 0; pair0 < k_; ++pair0)
            pair_in_ia_.push_back(br.in_ia(site, pair0));
        nu_ = &nu;
    }

    int site() const { return site_; }
    const GroupElement& g() const { return g_; }
    const std::vector<int>& partons() const { return partons_; }

    // exact phase for one assignment of group-element indices to the slots
    PhaseExponent phase(const std::vector<int>& alpha) const {
        PhaseExponent p;
        for (int i = 0; i < k_; ++i) {
            const int a = alpha[static_cast<size_t>(i)];
            const int b = alpha[static_cast<size_t>((i + 1) % k_)];
            if (pair_in_ia_[static_cast<size_t>(i)])
                p *= nu_->at(a, b, ginv_gbar_, gbar_idx_);
            else
                p *= nu_->at(b, a, ginv_gbar_, gbar_idx_).inverse();
        }
        return p;
    }

    int shift_digit(int digit) const { return spec_.mul_index(g_idx_, digit); }

    // unitary action on a sparse state: diagonal phase table then digit shift
    SparseState apply(const SparseState& s) const {
        const int d = spec_.order();
        size_t n = 1;
        for (int i = 0; i < k_; ++i) n *= static_cast<size_t>(d);
        std::vector<cplx> diag(n);
        std::vector<int> alpha(static_cast<size_t>(k_));
        for (size_t idx = 0; idx < n; ++idx) {
            size_t rest = idx;
            for (int i = k_; i-- > 0;) {
                alpha[static_cast<size_t>(i)] = static_cast<int>(rest % static_cast<size_t>(d));
                rest /= static_cast<size_t>(d);
            }
            diag[idx] = phase(alpha).value();
        }
        auto diag_op = LocalOperator::diagonal(partons_, d, std::move(diag));
        std::vector<int> perm(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j) perm[static_cast<size_t>(j)] = shift_digit(j);
        auto shift_op = LocalOperator::shift(
            partons_, d, std::vector<std::vector<int>>(static_cast<size_t>(k_), perm));
        return shift_op.apply(diag_op.apply(s));
    }

private:
    GroupSpec spec_;
    int site_;
    GroupElement g_, gbar_;
    int k_ = 0;
    int g_idx_ = 0, gbar_idx_ = 0, ginv_gbar_ = 0;
    std::vector<int> partons_;
    std::vector<bool> pair_in_ia_;
    const Cochain3* nu_;
};

inline SiteSymmetryOp site_operator(const Cochain3& nu, const BranchingAssignment& br,
                                    const Lattice& l, int site, const GroupElement& g,
                                    const GroupElement& gbar) {
    return SiteSymmetryOp(nu, br, l, site, g, gbar);
}

struct SymmetryReport {
    bool pass = true;
    std::string detail;
};

// U(g' g^-1) U(g) = U(g') as exact operator equality, all pairs and all
// parton assignments
inline SymmetryReport verify_linear_rep(const Cochain3& nu, const BranchingAssignment& br,
                                        const Lattice& l, int site, const GroupElement& gbar) {
    const GroupSpec& G = nu.spec;
    const int d = G.order();
    const int k = l.k_star(site);
    size_t n = 1;
    for (int i = 0; i < k; ++i) n *= static_cast<size_t>(d);

    for (int gi = 0; gi < d; ++gi)
        for (int gpi = 0; gpi < d; ++gpi) {
            const GroupElement g = G.element_at(gi);
            const GroupElement gp = G.element_at(gpi);
            const GroupElement gp_ginv = G.mul(gp, G.inv(g));
            SiteSymmetryOp u_g(nu, br, l, site, g, gbar);
            SiteSymmetryOp u_rest(nu, br, l, site, gp_ginv, gbar);
            SiteSymmetryOp u_gp(nu, br, l, site, gp, gbar);

            std::vector<int> alpha(static_cast<size_t>(k), 0);
            for (size_t idx = 0; idx < n; ++idx) {
                size_t rest = idx;
                for (int i = k; i-- > 0;) {
                    alpha[static_cast<size_t>(i)] = static_cast<int>(rest % static_cast<size_t>(d));
                    rest /= static_cast<size_t>(d);
                }
                std::vector<int> shifted(alpha);
                for (auto& a : shifted) a = G.mul_index(gi, a);
                PhaseExponent lhs = u_g.phase(alpha) * u_rest.phase(shifted);
                PhaseExponent rhs = u_gp.phase(alpha);
                if (lhs != rhs) {
                    SymmetryReport rep;
                    rep.pass = false;
                    rep.detail = "linear representation fails at site " + std::to_string(site) +
                                 " for g=" + g.str() + ", g'=" + gp.str();
                    return rep;
                }
            }
        }
    return {};
}

struct GlobalSymmetryReport {
    bool pass = true;
    // exponent of F_3 per group element index (all zero on pass)
    std::vector<PhaseExponent> f3;
    std::string detail;
};

// Applies (x)_i U_i^I(g) to the plaquette state exactly: for every face
// assignment the site phases must multiply to one and the shifted assignment
// carries the same amplitude, so F_3 = 1.
inline GlobalSymmetryReport verify_global_symmetry(const Cochain3& nu,
                                                   const BranchingAssignment& br, const Lattice& l,
                                                   const GroupElement& gbar) {
    const GroupSpec& G = nu.spec;
    const int d = G.order();
    GlobalSymmetryReport rep;

    const auto& faces = l.faces();
    std::map<int, int> parton_face_index;
    for (size_t fi = 0; fi < faces.size(); ++fi)
        for (int pid : faces[fi].cycle) parton_face_index[pid] = static_cast<int>(fi);
    for (const auto& p : l.partons())
        if (!parton_face_index.count(p.id)) {
            rep.pass = false;
            rep.detail = "face-free parton " + std::to_string(p.id) +
                         "; global symmetry check requires full plaquette cover";
            return rep;
        }

    for (int gi = 0; gi < d; ++gi) {
        const GroupElement g = G.element_at(gi);
        std::vector<SiteSymmetryOp> ops;
        std::vector<std::vector<int>> site_face_idx;  // per site, per slot: face index
        for (const auto& s : l.sites()) {
            ops.emplace_back(nu, br, l, s.id, g, gbar);
            std::vector<int> slots;
            for (int pid : s.partons) slots.push_back(parton_face_index.at(pid));
            site_face_idx.push_back(std::move(slots));
        }

        std::vector<int> h(faces.size(), 0);  // group element index per face
        std::optional<PhaseExponent> common;
        bool ok = true;
        while (true) {
            PhaseExponent total;
            for (size_t si = 0; si < ops.size(); ++si) {
                std::vector<int> alpha;
                alpha.reserve(site_face_idx[si].size());
                for (int fi : site_face_idx[si]) alpha.push_back(h[static_cast<size_t>(fi)]);
                total *= ops[si].phase(alpha);
            }
            if (!common)
                common = total;
            else if (*common != total) {
                ok = false;  // not even a pure global phase
            }
            if (!total.is_one()) ok = false;
            if (!ok) break;

            size_t f = 0;
            for (; f < faces.size(); ++f) {
                if (++h[f] < d) break;
                h[f] = 0;
            }
            if (f == faces.size()) break;
        }
        rep.f3.push_back(common.value_or(PhaseExponent()));
        if (!ok) {
            rep.pass = false;
            rep.detail = "global symmetry broken for g=" + g.str();
            return rep;
        }
    }
    return rep;
}

// state-level application of the full symmetry product (spot-check oracle)
inline SparseState apply_global_symmetry(const Cochain3& nu, const BranchingAssignment& br,
                                         const Lattice& l, const GroupElement& g,
                                         const GroupElement& gbar, const SparseState& s) {
    SparseState out = s;
    for (const auto& site : l.sites())
        out = SiteSymmetryOp(nu, br, l, site.id, g, gbar).apply(out);
    return out;
}

// ---- boundary action and MPUO ----

// bond directions along the periodic boundary chain: bond i couples slot i
// to slot i+1 (mod L); forward means the branched arrow points i -> i+1
struct BoundarySpec {
    int length = 0;
    std::vector<bool> forward;  // per bond i
};

inline BoundarySpec uniform_boundary(int length, bool forward = true) {
    return {length, std::vector<bool>(static_cast<size_t>(length), forward)};
}

inline PhaseExponent boundary_action(const Cochain3& nu, const BoundarySpec& boundary,
                                     const GroupElement& g, const GroupElement& gbar,
                                     const std::vector<int>& alpha) {
    const GroupSpec& G = nu.spec;
    const int L = boundary.length;
    if (static_cast<int>(alpha.size()) != L)
        throw std::invalid_argument("boundary_action: assignment length mismatch");
    const int gg = G.mul_index(G.inv_index(G.index_of(g)), G.index_of(gbar));
    const int gb = G.index_of(gbar);
    PhaseExponent p;
    for (int i = 0; i < L; ++i) {
        const int a = alpha[static_cast<size_t>(i)];
        const int b = alpha[static_cast<size_t>((i + 1) % L)];
        if (boundary.forward[static_cast<size_t>(i)])
            p *= nu.at(a, b, gg, gb).inverse();
        else
            p *= nu.at(b, a, gg, gb);
    }
    return p;
}

// Matrix-product form: per slot a virtual matrix over boundary labels with
// exactly one nonzero row; contraction reproduces boundary_action with exact
// exponents (the delta structure never adds two phases).
struct BoundaryMPUO {
    int d = 0;
    // tensors[i][alpha_i] = matrix (d x d) of optional exponents
    std::vector<std::vector<std::vector<std::optional<PhaseExponent>>>> tensors;
};

inline BoundaryMPUO boundary_mpuo(const Cochain3& nu, const BoundarySpec& boundary,
                                  const GroupElement& g, const GroupElement& gbar) {
    const GroupSpec& G = nu.spec;
    const int d = G.order();
    const int gg = G.mul_index(G.inv_index(G.index_of(g)), G.index_of(gbar));
    const int gb = G.index_of(gbar);
    BoundaryMPUO m;
    m.d = d;
    m.tensors.resize(static_cast<size_t>(boundary.length));
    for (int i = 0; i < boundary.length; ++i) {
        auto& per_alpha = m.tensors[static_cast<size_t>(i)];
        per_alpha.assign(static_cast<size_t>(d),
                         std::vector<std::optional<PhaseExponent>>(static_cast<size_t>(d * d)));
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                // row index = alpha_i, column index = alpha_{i+1}
                auto& cell = per_alpha[static_cast<size_t>(a)][static_cast<size_t>(a * d + b)];
                cell = boundary.forward[static_cast<size_t>(i)] ? nu.at(a, b, gg, gb).inverse()
                                                                : nu.at(b, a, gg, gb);
            }
    }
    return m;
}

inline PhaseExponent contract(const BoundaryMPUO& m, const std::vector<int>& alpha) {
    const int d = m.d;
    const int L = static_cast<int>(m.tensors.size());
    if (static_cast<int>(alpha.size()) != L)
        throw std::invalid_argument("contract: assignment length mismatch");
    using Mat = std::vector<std::optional<PhaseExponent>>;
    auto mat_of = [&](int i) { return m.tensors[static_cast<size_t>(i)][static_cast<size_t>(alpha[static_cast<size_t>(i)])]; };
    Mat acc = mat_of(0);
    for (int i = 1; i < L; ++i) {
        Mat next = mat_of(i);
        Mat prod(static_cast<size_t>(d * d));
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                std::optional<PhaseExponent> cell;
                for (int k = 0; k < d; ++k) {
                    const auto& x = acc[static_cast<size_t>(r * d + k)];
                    const auto& y = next[static_cast<size_t>(k * d + c)];
                    if (!x || !y) continue;
                    if (cell)
                        throw structural_error("contract: virtual chain is not delta-structured");
                    cell = *x * *y;
                }
                prod[static_cast<size_t>(r * d + c)] = cell;
            }
        acc = std::move(prod);
    }
    // trace
    std::optional<PhaseExponent> tr;
    for (int r = 0; r < d; ++r) {
        const auto& cell = acc[static_cast<size_t>(r * d + r)];
        if (!cell) continue;
        if (tr) throw structural_error("contract: trace is not a single term");
        tr = *cell;
    }
    if (!tr) throw structural_error("contract: vanishing trace");
    return *tr;
}

}  // namespace plaq
