#pragma once

// CZX-model operators and Hamiltonian (qubit partons). The on-site unitary
// combines a full parton flip with a cyclic controlled-phase product; the
// sCZ variant reproduces the cochain construction for c = 1, gbar = 1.

#include "plaquette/lattice.hpp"
#include "plaquette/state.hpp"

namespace plaq {

struct representation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CzxVariant { czx, sczx, iczx };

inline const char* to_string(CzxVariant v) {
    switch (v) {
        case CzxVariant::czx: return "czx";
        case CzxVariant::sczx: return "sczx";
        case CzxVariant::iczx: return "iczx";
    }
    return "?";
}

inline CzxVariant czx_variant_from(const std::string& s) {
    if (s == "czx") return CzxVariant::czx;
    if (s == "sczx") return CzxVariant::sczx;
    if (s == "iczx") return CzxVariant::iczx;
    throw std::invalid_argument("unknown CZX variant '" + s + "'");
}

namespace detail {

inline int bit(size_t x, int k, int i) { return static_cast<int>((x >> (k - 1 - i)) & 1u); }

}  // namespace detail

// dense 2^k x 2^k on-site matrix for one variant
inline LocalOperator czx_site_operator(const Lattice& l, const BranchingAssignment& br, int site,
                                       CzxVariant variant) {
    const int k = l.k_star(site);
    const size_t n = static_cast<size_t>(1) << k;
    std::vector<cplx> m(n * n, 0.0);
    const cplx x_scale = (variant == CzxVariant::iczx)
                             ? std::pow(cplx(0.0, 1.0), static_cast<double>(k))
                             : cplx(1.0, 0.0);
    for (size_t x = 0; x < n; ++x) {
        double phase = 1.0;
        if (variant == CzxVariant::sczx) {
            for (int i = 0; i < k; ++i) {
                const int a = detail::bit(x, k, i);
                const int b = detail::bit(x, k, (i + 1) % k);
                // sCZ_{ct} phase (-1)^{(1-c) t}; i_b factors use reversed control
                if (br.in_ia(site, i))
                    phase *= (a == 0 && b == 1) ? -1.0 : 1.0;
                else
                    phase *= (b == 0 && a == 1) ? -1.0 : 1.0;
            }
        } else {
            for (int i = 0; i < k; ++i)
                if (detail::bit(x, k, i) && detail::bit(x, k, (i + 1) % k)) phase = -phase;
        }
        const size_t flipped = ~x & (n - 1);
        m[flipped * n + x] = x_scale * phase;
    }
    return LocalOperator::dense(l.site(site).partons, 2, std::move(m));
}

// one-pass form of the on-site unitary: diagonal controlled-phase table
// followed by the full parton flip (the iX scalar folds into the diagonal)
struct CzxSiteOp {
    LocalOperator diag;
    LocalOperator shift;

    SparseState apply(const SparseState& s) const { return shift.apply(diag.apply(s)); }
};

inline CzxSiteOp czx_site_op_fast(const Lattice& l, const BranchingAssignment& br, int site,
                                  CzxVariant variant) {
    const int k = l.k_star(site);
    const size_t n = static_cast<size_t>(1) << k;
    const cplx x_scale = (variant == CzxVariant::iczx)
                             ? std::pow(cplx(0.0, 1.0), static_cast<double>(k))
                             : cplx(1.0, 0.0);
    std::vector<cplx> diag(n);
    for (size_t x = 0; x < n; ++x) {
        double phase = 1.0;
        if (variant == CzxVariant::sczx) {
            for (int i = 0; i < k; ++i) {
                const int a = detail::bit(x, k, i);
                const int b = detail::bit(x, k, (i + 1) % k);
                if (br.in_ia(site, i))
                    phase *= (a == 0 && b == 1) ? -1.0 : 1.0;
                else
                    phase *= (b == 0 && a == 1) ? -1.0 : 1.0;
            }
        } else {
            for (int i = 0; i < k; ++i)
                if (detail::bit(x, k, i) && detail::bit(x, k, (i + 1) % k)) phase = -phase;
        }
        diag[x] = x_scale * phase;
    }
    const auto& partons = l.site(site).partons;
    std::vector<std::vector<int>> perms(partons.size(), {1, 0});
    return {LocalOperator::diagonal(partons, 2, std::move(diag)),
            LocalOperator::shift(partons, 2, std::move(perms))};
}

struct CZXOperatorSet {
    CzxVariant variant = CzxVariant::czx;
    std::map<int, LocalOperator> site_ops;  // dense form, for matrix checks
    std::map<int, CzxSiteOp> fast_ops;

    SparseState apply_all(const SparseState& s) const {
        SparseState out = s;
        for (const auto& [site, op] : fast_ops) out = op.apply(out);
        return out;
    }
};

inline bool squares_to_identity(const LocalOperator& op, double* minus_one = nullptr) {
    const size_t n = op.local_dim();
    const auto& m = op.matrix();
    bool is_id = true, is_minus = true;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            cplx acc = 0;
            for (size_t t = 0; t < n; ++t) acc += m[i * n + t] * m[t * n + j];
            const cplx eye = (i == j) ? 1.0 : 0.0;
            if (std::abs(acc - eye) > kOpTol) is_id = false;
            if (std::abs(acc + eye) > kOpTol) is_minus = false;
        }
    if (minus_one) *minus_one = is_minus ? 1.0 : 0.0;
    return is_id;
}

inline CZXOperatorSet czx_operators(const Lattice& l, const BranchingAssignment& br,
                                    CzxVariant variant) {
    CZXOperatorSet set;
    set.variant = variant;
    for (const auto& s : l.sites()) {
        auto op = czx_site_operator(l, br, s.id, variant);
        double minus = 0;
        if (!squares_to_identity(op, &minus)) {
            if (variant == CzxVariant::czx && l.k_star(s.id) % 2 == 1 && minus > 0)
                throw representation_error(
                    "czx variant: U_CZX^2 = -1 on site " + std::to_string(s.id) +
                    " (odd parton count); use iczx or sczx");
            throw representation_error("CZX operator does not square to identity on site " +
                                       std::to_string(s.id));
        }
        set.site_ops.emplace(s.id, std::move(op));
        set.fast_ops.emplace(s.id, czx_site_op_fast(l, br, s.id, variant));
    }
    return set;
}

// H_pj = -X_face (x) prod of equal-digit projectors on the neighboring
// half plaquettes (the partons of each adjacent face along the shared edge)
struct CzxTerm {
    int face = -1;
    LocalOperator flip;
    std::vector<LocalOperator> projectors;
};

inline std::vector<CzxTerm> czx_hamiltonian(const Lattice& l) {
    std::vector<CzxTerm> terms;
    for (const auto& f : l.faces()) {
        const int k = static_cast<int>(f.cycle.size());
        const size_t n = static_cast<size_t>(1) << k;
        std::vector<cplx> flip(n * n, 0.0);
        flip[0 * n + (n - 1)] = 1.0;
        flip[(n - 1) * n + 0] = 1.0;
        CzxTerm term;
        term.face = f.id;
        term.flip = LocalOperator::dense(f.cycle, 2, std::move(flip));

        for (const auto& e : l.edges()) {
            // the neighbouring face's two partons along the shared edge:
            // crossing a holds (from-face, to-face) partons, crossing b the
            // reversed pair at the other endpoint
            int pa = -1, pb = -1;
            if (e.a.face_from == f.id) {
                pa = e.a.parton_to;    // in face_to
                pb = e.b.parton_from;  // in face_to
            } else if (e.a.face_to == f.id) {
                pa = e.a.parton_from;  // in face_from
                pb = e.b.parton_to;    // in face_from
            } else {
                continue;
            }
            std::vector<cplx> diag(4, 0.0);
            diag[0] = 1.0;
            diag[3] = 1.0;
            term.projectors.push_back(LocalOperator::diagonal({pa, pb}, 2, std::move(diag)));
        }
        terms.push_back(std::move(term));
    }
    return terms;
}

inline SparseState apply_czx_term(const CzxTerm& term, const SparseState& s) {
    SparseState out = s;
    for (const auto& p : term.projectors) out = p.apply(out);
    out = term.flip.apply(out);
    out.scale(-1.0);
    return out;
}

// random state in the plaquette sector (one digit per face, face-free
// partons fixed to 0): sparse with d^faces amplitudes, closed under the CZX
// operators and the Hamiltonian terms
inline SparseState random_sector_state(const Lattice& l, int d, std::uint64_t seed) {
    std::vector<int> partons;
    for (const auto& p : l.partons()) partons.push_back(p.id);
    SparseState s(d, partons);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const auto& faces = l.faces();
    std::vector<int> h(faces.size(), 0);
    while (true) {
        std::string key(partons.size(), '\0');
        for (size_t f = 0; f < faces.size(); ++f)
            for (int pid : faces[f].cycle)
                key[static_cast<size_t>(s.parton_index(pid))] = static_cast<char>(h[f]);
        s.amps()[key] = cplx(gauss(rng), gauss(rng));
        size_t f = 0;
        for (; f < faces.size(); ++f) {
            if (++h[f] < d) break;
            h[f] = 0;
        }
        if (f == faces.size()) break;
    }
    s.normalize();
    return s;
}

}  // namespace plaq
