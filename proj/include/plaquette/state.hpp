#pragma once

// Exact sparse simulation of many-qudit pure states. Keys are byte strings
// holding one digit per parton; amplitudes are complex doubles. Operators
// come in diagonal, digit-permutation and dense forms so plaquette states
// never densify under symmetry or measurement patterns.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "plaquette/lattice.hpp"

namespace plaq {

using cplx = std::complex<double>;

constexpr double kAmpPrune = 1e-14;
constexpr double kOpTol = 1e-12;

inline cplx omega_root(int d, long long power = 1) {
    const double theta = 2.0 * 3.14159265358979323846 * static_cast<double>(((power % d) + d) % d) /
                         static_cast<double>(d);
    return {std::cos(theta), std::sin(theta)};
}

class SparseState {
public:
    SparseState(int d, std::vector<int> partons) : d_(d), partons_(std::move(partons)) {
        std::sort(partons_.begin(), partons_.end());
        if (std::adjacent_find(partons_.begin(), partons_.end()) != partons_.end())
            throw std::invalid_argument("SparseState: duplicate parton ids");
    }

    static SparseState basis_state(int d, const std::vector<int>& partons,
                                   const std::vector<int>& digits) {
        SparseState s(d, partons);
        if (digits.size() != partons.size())
            throw std::invalid_argument("basis_state: digit count mismatch");
        std::string key(partons.size(), '\0');
        for (size_t i = 0; i < partons.size(); ++i) {
            int idx = s.parton_index(partons[i]);
            key[static_cast<size_t>(idx)] = static_cast<char>(digits[i]);
        }
        s.amps_[key] = 1.0;
        return s;
    }

    int d() const { return d_; }
    const std::vector<int>& partons() const { return partons_; }
    size_t size() const { return amps_.size(); }

    int parton_index(int parton_id) const {
        auto it = std::lower_bound(partons_.begin(), partons_.end(), parton_id);
        if (it == partons_.end() || *it != parton_id)
            throw std::invalid_argument("SparseState: parton " + std::to_string(parton_id) +
                                        " not in state");
        return static_cast<int>(it - partons_.begin());
    }

    std::unordered_map<std::string, cplx>& amps() { return amps_; }
    const std::unordered_map<std::string, cplx>& amps() const { return amps_; }

    double norm2() const {
        double n = 0;
        for (const auto& [k, a] : amps_) n += std::norm(a);
        return n;
    }

    void scale(cplx f) {
        for (auto& [k, a] : amps_) a *= f;
    }

    void normalize() {
        double n = std::sqrt(norm2());
        if (n < kAmpPrune) throw std::runtime_error("SparseState: normalizing a null state");
        scale(1.0 / n);
    }

    void prune(double eps = kAmpPrune) {
        for (auto it = amps_.begin(); it != amps_.end();) {
            if (std::abs(it->second) < eps)
                it = amps_.erase(it);
            else
                ++it;
        }
    }

    // || this - other ||^2 over the union support
    double distance2(const SparseState& other) const {
        if (d_ != other.d_ || partons_ != other.partons_)
            throw std::invalid_argument("distance2: mismatched partons");
        double acc = 0;
        for (const auto& [k, a] : amps_) {
            auto it = other.amps_.find(k);
            acc += std::norm(a - (it == other.amps_.end() ? cplx(0) : it->second));
        }
        for (const auto& [k, b] : other.amps_)
            if (!amps_.count(k)) acc += std::norm(b);
        return acc;
    }

    // <this|other>, exact over the shared sparse support
    cplx overlap(const SparseState& other) const {
        if (d_ != other.d_ || partons_ != other.partons_)
            throw std::invalid_argument("overlap: mismatched partons");
        const auto& small = amps_.size() <= other.amps_.size() ? amps_ : other.amps_;
        const auto& big = amps_.size() <= other.amps_.size() ? other.amps_ : amps_;
        const bool small_is_this = amps_.size() <= other.amps_.size();
        cplx acc = 0;
        for (const auto& [k, a] : small) {
            auto it = big.find(k);
            if (it == big.end()) continue;
            acc += small_is_this ? std::conj(a) * it->second : std::conj(it->second) * a;
        }
        return acc;
    }

    SparseState tensor(const SparseState& other) const {
        if (d_ != other.d_) throw std::invalid_argument("tensor: dimension mismatch");
        std::vector<int> ps = partons_;
        ps.insert(ps.end(), other.partons_.begin(), other.partons_.end());
        SparseState out(d_, ps);
        // positions of each factor's partons inside the merged key
        std::vector<int> pos_a(partons_.size()), pos_b(other.partons_.size());
        for (size_t i = 0; i < partons_.size(); ++i)
            pos_a[i] = out.parton_index(partons_[i]);
        for (size_t i = 0; i < other.partons_.size(); ++i)
            pos_b[i] = out.parton_index(other.partons_[i]);
        for (const auto& [ka, aa] : amps_)
            for (const auto& [kb, ab] : other.amps_) {
                std::string key(ps.size(), '\0');
                for (size_t i = 0; i < ka.size(); ++i) key[static_cast<size_t>(pos_a[i])] = ka[i];
                for (size_t i = 0; i < kb.size(); ++i) key[static_cast<size_t>(pos_b[i])] = kb[i];
                out.amps_[key] = aa * ab;
            }
        return out;
    }

    // text dump: one "<assignment> <re> <im>" line per amplitude, sorted
    std::string dump() const {
        std::vector<std::string> lines;
        lines.reserve(amps_.size());
        for (const auto& [k, a] : amps_) {
            std::string assignment;
            for (char c : k) assignment += static_cast<char>(c < 10 ? '0' + c : 'a' + c - 10);
            std::ostringstream os;
            os.precision(15);
            os << assignment << " " << a.real() << " " << a.imag();
            lines.push_back(os.str());
        }
        std::sort(lines.begin(), lines.end());
        std::string out;
        for (const auto& l : lines) out += l + "\n";
        return out;
    }

private:
    int d_;
    std::vector<int> partons_;
    std::unordered_map<std::string, cplx> amps_;
};

class LocalOperator {
public:
    enum class Kind { diagonal, shift, dense };

    static LocalOperator diagonal(std::vector<int> support, int d, std::vector<cplx> phases) {
        LocalOperator op;
        op.kind_ = Kind::diagonal;
        op.support_ = std::move(support);
        op.d_ = d;
        op.diag_ = std::move(phases);
        if (op.diag_.size() != op.local_dim())
            throw std::invalid_argument("diagonal: wrong table size");
        op.unitary_ = true;
        for (const auto& v : op.diag_)
            if (std::abs(std::abs(v) - 1.0) > kOpTol) op.unitary_ = false;
        return op;
    }

    // one digit permutation per support parton
    static LocalOperator shift(std::vector<int> support, int d,
                               std::vector<std::vector<int>> perms) {
        LocalOperator op;
        op.kind_ = Kind::shift;
        op.support_ = std::move(support);
        op.d_ = d;
        op.perms_ = std::move(perms);
        if (op.perms_.size() != op.support_.size())
            throw std::invalid_argument("shift: one permutation per parton required");
        for (const auto& p : op.perms_) {
            std::vector<bool> seen(static_cast<size_t>(d), false);
            if (static_cast<int>(p.size()) != d) throw std::invalid_argument("shift: bad table");
            for (int v : p) {
                if (v < 0 || v >= d || seen[static_cast<size_t>(v)])
                    throw std::invalid_argument("shift: not a permutation");
                seen[static_cast<size_t>(v)] = true;
            }
        }
        op.unitary_ = true;
        return op;
    }

    // row-major d^k x d^k matrix, rows = output
    static LocalOperator dense(std::vector<int> support, int d, std::vector<cplx> matrix) {
        LocalOperator op;
        op.kind_ = Kind::dense;
        op.support_ = std::move(support);
        op.d_ = d;
        op.dense_ = std::move(matrix);
        const size_t n = op.local_dim();
        if (op.dense_.size() != n * n) throw std::invalid_argument("dense: wrong matrix size");
        // classify: unitary / projector flags checked at construction
        op.unitary_ = true;
        op.projector_ = true;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                cplx utu = 0, p2 = 0;
                for (size_t k = 0; k < n; ++k) {
                    utu += std::conj(op.dense_[k * n + i]) * op.dense_[k * n + j];
                    p2 += op.dense_[i * n + k] * op.dense_[k * n + j];
                }
                const cplx eye = (i == j) ? 1.0 : 0.0;
                if (std::abs(utu - eye) > kOpTol) op.unitary_ = false;
                if (std::abs(p2 - op.dense_[i * n + j]) > kOpTol ||
                    std::abs(op.dense_[i * n + j] - std::conj(op.dense_[j * n + i])) > kOpTol)
                    op.projector_ = false;
            }
        return op;
    }

    Kind kind() const { return kind_; }
    const std::vector<int>& support() const { return support_; }
    bool unitary() const { return unitary_; }
    bool projector() const { return projector_; }
    int d() const { return d_; }
    const std::vector<cplx>& matrix() const { return dense_; }

    size_t local_dim() const {
        size_t n = 1;
        for (size_t i = 0; i < support_.size(); ++i) n *= static_cast<size_t>(d_);
        return n;
    }

    SparseState apply(const SparseState& s) const {
        for (int p : support_) s.parton_index(p);  // membership check
        if (s.d() != d_) throw std::invalid_argument("apply: dimension mismatch");
        std::vector<int> pos(support_.size());
        for (size_t i = 0; i < support_.size(); ++i) pos[i] = s.parton_index(support_[i]);

        const int d = d_;
        if (kind_ == Kind::diagonal) {
            SparseState out = s;
            for (auto& [k, a] : out.amps()) {
                size_t idx = 0;
                for (int p : pos) idx = idx * static_cast<size_t>(d) + static_cast<size_t>(k[static_cast<size_t>(p)]);
                a *= diag_[idx];
            }
            if (!unitary_) out.prune();  // projector entries may vanish
            return out;
        }

        SparseState out(s.d(), s.partons());
        auto& dst = out.amps();
        dst.reserve(s.amps().size());
        switch (kind_) {
            case Kind::diagonal:
                break;  // handled above
            case Kind::shift:
                for (const auto& [k, a] : s.amps()) {
                    std::string nk = k;
                    for (size_t i = 0; i < pos.size(); ++i)
                        nk[static_cast<size_t>(pos[i])] = static_cast<char>(
                            perms_[i][static_cast<size_t>(k[static_cast<size_t>(pos[i])])]);
                    dst[nk] += a;
                }
                break;
            case Kind::dense: {
                const size_t n = local_dim();
                for (const auto& [k, a] : s.amps()) {
                    size_t in = 0;
                    for (int p : pos) in = in * static_cast<size_t>(d) + static_cast<size_t>(k[static_cast<size_t>(p)]);
                    for (size_t outi = 0; outi < n; ++outi) {
                        const cplx m = dense_[outi * n + in];
                        if (std::abs(m) < kAmpPrune) continue;
                        std::string nk = k;
                        size_t rest = outi;
                        for (size_t i = pos.size(); i-- > 0;) {
                            nk[static_cast<size_t>(pos[i])] = static_cast<char>(rest % static_cast<size_t>(d));
                            rest /= static_cast<size_t>(d);
                        }
                        dst[nk] += a * m;
                    }
                }
                break;
            }
        }
        out.prune();
        return out;
    }

private:
    Kind kind_ = Kind::diagonal;
    std::vector<int> support_;
    int d_ = 2;
    std::vector<cplx> diag_;
    std::vector<std::vector<int>> perms_;
    std::vector<cplx> dense_;
    bool unitary_ = false;
    bool projector_ = false;
};

inline SparseState apply(const LocalOperator& op, const SparseState& s) { return op.apply(s); }

// ---- gate constructors ----

inline LocalOperator op_x(int d, int parton, int power = 1) {
    std::vector<int> perm(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) perm[static_cast<size_t>(j)] = ((j + power) % d + d) % d;
    return LocalOperator::shift({parton}, d, {perm});
}

inline LocalOperator op_z(int d, int parton, int power = 1) {
    std::vector<cplx> diag(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) diag[static_cast<size_t>(j)] = omega_root(d, static_cast<long long>(j) * power);
    return LocalOperator::diagonal({parton}, d, std::move(diag));
}

inline LocalOperator op_fourier(int d, int parton, bool dagger = false) {
    const size_t n = static_cast<size_t>(d);
    std::vector<cplx> m(n * n);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j)
            m[static_cast<size_t>(k) * n + static_cast<size_t>(j)] =
                s * omega_root(d, static_cast<long long>(dagger ? -k * j : k * j));
    return LocalOperator::dense({parton}, d, std::move(m));
}

inline LocalOperator op_cz(int d, int a, int b, int power = 1) {
    const size_t n = static_cast<size_t>(d);
    std::vector<cplx> diag(n * n);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            diag[static_cast<size_t>(j) * n + static_cast<size_t>(k)] =
                omega_root(d, static_cast<long long>(j) * k * power);
    return LocalOperator::diagonal({a, b}, d, std::move(diag));
}

// sCZ_{ct} = |0><0| (x) Z + |1><1| (x) 1 (qubits only)
inline LocalOperator op_scz(int control, int target) {
    std::vector<cplx> diag(4, 1.0);
    diag[1] = -1.0;  // (c,t) = (0,1)
    return LocalOperator::diagonal({control, target}, 2, std::move(diag));
}

inline LocalOperator op_identity(int d, int parton) {
    return LocalOperator::diagonal({parton}, d, std::vector<cplx>(static_cast<size_t>(d), 1.0));
}

// ---- states ----

// product over faces of (1/sqrt(d)) sum_g |g,...,g>; face-free partons |0>
inline SparseState plaquette_state(const Lattice& l, int d, size_t max_amps = (1u << 20)) {
    std::vector<int> partons;
    for (const auto& p : l.partons()) partons.push_back(p.id);
    SparseState s(d, partons);

    const auto& faces = l.faces();
    double count = 1;
    for (size_t i = 0; i < faces.size(); ++i) {
        count *= d;
        if (count > static_cast<double>(max_amps))
            throw capacity_error("plaquette_state: amplitude count d^" +
                                 std::to_string(faces.size()) + " exceeds bound " +
                                 std::to_string(max_amps));
    }

    std::vector<std::vector<int>> face_positions;
    for (const auto& f : faces) {
        std::vector<int> pos;
        for (int pid : f.cycle) pos.push_back(s.parton_index(pid));
        face_positions.push_back(std::move(pos));
    }

    const double amp = std::pow(static_cast<double>(d), -0.5 * static_cast<double>(faces.size()));
    std::vector<int> assign(faces.size(), 0);
    std::string base(partons.size(), '\0');  // face-free partons stay 0
    while (true) {
        std::string key = base;
        for (size_t f = 0; f < faces.size(); ++f)
            for (int p : face_positions[f]) key[static_cast<size_t>(p)] = static_cast<char>(assign[f]);
        s.amps()[key] = amp;
        size_t f = 0;
        for (; f < faces.size(); ++f) {
            if (++assign[f] < d) break;
            assign[f] = 0;
        }
        if (f == faces.size()) break;
    }
    return s;
}

// Haar-ish random unitary via Gram-Schmidt on a Gaussian matrix (row-major)
inline std::vector<cplx> random_unitary(int d, std::mt19937_64& rng) {
    const size_t n = static_cast<size_t>(d);
    std::normal_distribution<double> gauss;
    std::vector<cplx> m(n * n);
    for (auto& v : m) v = cplx(gauss(rng), gauss(rng));
    for (size_t c = 0; c < n; ++c) {
        for (size_t prev = 0; prev < c; ++prev) {
            cplx dot = 0;
            for (size_t r = 0; r < n; ++r) dot += std::conj(m[r * n + prev]) * m[r * n + c];
            for (size_t r = 0; r < n; ++r) m[r * n + c] -= dot * m[r * n + prev];
        }
        double nrm = 0;
        for (size_t r = 0; r < n; ++r) nrm += std::norm(m[r * n + c]);
        nrm = std::sqrt(nrm);
        for (size_t r = 0; r < n; ++r) m[r * n + c] /= nrm;
    }
    return m;
}

inline SparseState random_state(int d, const std::vector<int>& partons, std::uint64_t seed) {
    SparseState s(d, partons);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    size_t n = 1;
    for (size_t i = 0; i < partons.size(); ++i) n *= static_cast<size_t>(d);
    std::string key(partons.size(), '\0');
    std::function<void(size_t)> fill = [&](size_t i) {
        if (i == partons.size()) {
            s.amps()[key] = cplx(gauss(rng), gauss(rng));
            return;
        }
        for (int v = 0; v < d; ++v) {
            key[i] = static_cast<char>(v);
            fill(i + 1);
        }
    };
    fill(0);
    s.normalize();
    return s;
}

}  // namespace plaq
