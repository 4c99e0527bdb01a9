#pragma once

// Pauli frame: per-qudit byproduct exponents (x, z) meaning a pending
// correction X^x Z^z, tracked classically up to global phase.

#include <map>

#include "plaquette/state.hpp"

namespace plaq {

struct PauliFrame {
    int d = 2;
    std::map<int, std::pair<int, int>> ops;  // qudit id -> (x, z)

    PauliFrame() = default;
    explicit PauliFrame(int dim) : d(dim) {}

    void add_x(int q, int power) {
        auto& e = ops[q];
        e.first = ((e.first + power) % d + d) % d;
        drop_if_trivial(q);
    }
    void add_z(int q, int power) {
        auto& e = ops[q];
        e.second = ((e.second + power) % d + d) % d;
        drop_if_trivial(q);
    }

    std::pair<int, int> at(int q) const {
        auto it = ops.find(q);
        return it == ops.end() ? std::pair<int, int>{0, 0} : it->second;
    }

    bool empty() const { return ops.empty(); }

    // frame after applying a Fourier gate to qudit q: (x,z) -> (-z, x)
    void fourier_update(int q) {
        auto [x, z] = at(q);
        ops.erase(q);
        add_x(q, -z);
        add_z(q, x);
    }

    // state = X^x Z^z |ideal>; applying these ops to |ideal> reconstructs it
    SparseState apply_to(const SparseState& ideal) const {
        SparseState s = ideal;
        for (const auto& [q, xz] : ops) {
            if (xz.second) s = op_z(d, q, xz.second).apply(s);
            if (xz.first) s = op_x(d, q, xz.first).apply(s);
        }
        return s;
    }

    // undoes the frame on a raw state: Z^-z X^-x, up to global phase
    SparseState correct(const SparseState& raw) const {
        SparseState s = raw;
        for (const auto& [q, xz] : ops) {
            if (xz.first) s = op_x(d, q, -xz.first).apply(s);
            if (xz.second) s = op_z(d, q, -xz.second).apply(s);
        }
        return s;
    }

private:
    void drop_if_trivial(int q) {
        auto it = ops.find(q);
        if (it != ops.end() && it->second.first == 0 && it->second.second == 0) ops.erase(it);
    }
};

// componentwise composition mod d; the commutation global phase is discarded
inline PauliFrame frame_compose(const PauliFrame& f, const PauliFrame& g) {
    if (f.d != g.d) throw std::invalid_argument("frame_compose: dimension mismatch");
    PauliFrame out = f;
    for (const auto& [q, xz] : g.ops) {
        out.add_x(q, xz.first);
        out.add_z(q, xz.second);
    }
    return out;
}

}  // namespace plaq
