#pragma once

// Unit cells for the built-in lattices and their torus tilings. Slot tables
// and branching tuples follow the counterclockwise parton labelings that make
// the shipped sublattice assignments a global symmetry.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "plaquette/lattice.hpp"

namespace plaq {

struct UnitCell {
    struct SlotRef {
        int face_cls, dx, dy;
    };
    struct FaceEntry {
        int site_cls, dx, dy, slot;
    };

    std::string name;
    std::vector<std::vector<SlotRef>> site_slots;     // per site class, ccw
    std::vector<std::vector<FaceEntry>> face_cycles;  // per face class
    std::vector<std::string> sublattice;              // per site class
    std::map<std::string, BranchingSets> branching;

    int site_classes() const { return static_cast<int>(site_slots.size()); }
    int face_classes() const { return static_cast<int>(face_cycles.size()); }

    // every face-cycle entry must point back at the matching site slot
    void check_consistency() const {
        std::vector<std::vector<int>> used(site_slots.size());
        for (size_t c = 0; c < site_slots.size(); ++c)
            used[c].assign(site_slots[c].size(), 0);
        for (size_t fc = 0; fc < face_cycles.size(); ++fc)
            for (const auto& e : face_cycles[fc]) {
                const auto& ref = site_slots.at(static_cast<size_t>(e.site_cls)).at(
                    static_cast<size_t>(e.slot));
                if (ref.face_cls != static_cast<int>(fc) || ref.dx != -e.dx || ref.dy != -e.dy)
                    throw structural_error("unit cell " + name + ": slot/face tables disagree");
                used[static_cast<size_t>(e.site_cls)][static_cast<size_t>(e.slot)]++;
            }
        for (const auto& u : used)
            for (int n : u)
                if (n != 1) throw structural_error("unit cell " + name + ": slot not in one face");
    }
};

namespace detail {

inline int mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace detail

// Tiles the cell over an nx-by-ny torus. Site ids are cell*S + class, parton
// ids are site*8 + slot, face ids are cell*F + class; all deterministic.
inline std::pair<Lattice, BranchingAssignment> tile_unit_cell(const UnitCell& cell, int nx,
                                                              int ny) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("tile_unit_cell: nx, ny must be >= 1");
    cell.check_consistency();
    const int S = cell.site_classes();
    const int F = cell.face_classes();

    auto site_id = [&](int x, int y, int cls) {
        return (detail::mod(y, ny) * nx + detail::mod(x, nx)) * S + cls;
    };
    auto parton_id = [&](int x, int y, int cls, int slot) { return site_id(x, y, cls) * 8 + slot; };
    auto face_id = [&](int x, int y, int cls) {
        return (detail::mod(y, ny) * nx + detail::mod(x, nx)) * F + cls;
    };

    std::vector<Site> sites;
    std::vector<Face> faces;
    BranchingAssignment br;
    br.sets = cell.branching;

    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            for (int cls = 0; cls < S; ++cls) {
                Site s;
                s.id = site_id(x, y, cls);
                const auto& slots = cell.site_slots[static_cast<size_t>(cls)];
                for (size_t slot = 0; slot < slots.size(); ++slot)
                    s.partons.push_back(parton_id(x, y, cls, static_cast<int>(slot)));
                sites.push_back(std::move(s));
                br.sublattice[site_id(x, y, cls)] = cell.sublattice[static_cast<size_t>(cls)];
            }
            for (int cls = 0; cls < F; ++cls) {
                Face f;
                f.id = face_id(x, y, cls);
                for (const auto& e : cell.face_cycles[static_cast<size_t>(cls)])
                    f.cycle.push_back(parton_id(x + e.dx, y + e.dy, e.site_cls, e.slot));
                faces.push_back(std::move(f));
            }
        }

    return {Lattice(std::move(sites), std::move(faces), true), std::move(br)};
}

inline UnitCell builtin_cell(const std::string& name) {
    UnitCell c;
    c.name = name;
    if (name == "square") {
        // one site, four partons at the diagonal corners, one face class
        c.site_slots = {{{0, 0, 0}, {0, -1, 0}, {0, -1, -1}, {0, 0, -1}}};
        c.face_cycles = {{{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 2}, {0, 0, 1, 3}}};
        c.sublattice = {"A"};
        c.branching["A"] = {{1, 2}, {3, 4}};
    } else if (name == "triangular") {
        // six partons per site in the six surrounding triangles (U, D alternating)
        c.site_slots = {{{0, 0, 0}, {1, -1, 0}, {0, -1, 0}, {1, -1, -1}, {0, 0, -1}, {1, 0, -1}}};
        c.face_cycles = {
            {{0, 0, 0, 0}, {0, 1, 0, 2}, {0, 0, 1, 4}},  // up triangle
            {{0, 1, 0, 1}, {0, 1, 1, 3}, {0, 0, 1, 5}},  // down triangle
        };
        c.sublattice = {"A"};
        c.branching["A"] = {{1, 2, 3}, {4, 5, 6}};
    } else if (name == "honeycomb") {
        // two sublattices with mirrored factor patterns
        c.site_slots = {
            {{0, 0, 0}, {0, -1, 0}, {0, 0, -1}},   // A
            {{0, -1, 1}, {0, -1, 0}, {0, 0, 0}},   // B
        };
        c.face_cycles = {{{1, 1, 0, 1},
                          {0, 0, 1, 2},
                          {1, 0, 0, 2},
                          {0, 0, 0, 0},
                          {1, 1, -1, 0},
                          {0, 1, 0, 1}}};
        c.sublattice = {"A", "B"};
        c.branching["A"] = {{1, 2}, {3}};
        c.branching["B"] = {{1}, {2, 3}};
    } else if (name == "kagome") {
        // sublattices A, B, C; faces: down triangle, up triangle, hexagon
        c.site_slots = {
            {{2, 1, 0}, {0, 0, 0}, {2, 0, 0}, {1, 0, -1}},  // A
            {{2, 0, 0}, {0, 0, 0}, {2, 0, 1}, {1, -1, 0}},  // B
            {{0, 0, 0}, {2, 1, 0}, {1, 0, 0}, {2, 0, 1}},   // C
        };
        c.face_cycles = {
            {{0, 0, 0, 1}, {2, 0, 0, 0}, {1, 0, 0, 1}},                  // T1
            {{2, 0, 0, 2}, {1, 1, 0, 3}, {0, 0, 1, 3}},                  // T2
            {{0, 0, 0, 2}, {1, 0, 0, 0}, {2, -1, 0, 1},                  // hexagon
             {0, -1, 0, 0}, {1, 0, -1, 2}, {2, 0, -1, 3}},
        };
        c.sublattice = {"A", "B", "C"};
        c.branching["A"] = {{1, 2}, {3, 4}};
        c.branching["B"] = {{2, 3}, {1, 4}};
        c.branching["C"] = {{2, 3}, {1, 4}};
    } else {
        throw std::invalid_argument("unknown builtin lattice '" + name + "'");
    }
    c.check_consistency();
    return c;
}

inline std::pair<Lattice, BranchingAssignment> builtin(const std::string& name, int nx, int ny) {
    auto [lattice, br] = tile_unit_cell(builtin_cell(name), nx, ny);
    auto rep = lattice.validate();
    if (!rep.pass)
        throw structural_error("builtin " + name + " " + std::to_string(nx) + "x" +
                               std::to_string(ny) + " fails validation:\n" + rep.str());
    auto brep = lattice.check_branching(br);
    if (!brep.pass)
        throw structural_error("builtin " + name + ": shipped branching invalid:\n" + brep.str());
    return {std::move(lattice), std::move(br)};
}

}  // namespace plaq
