#pragma once

// Combinatorial substrate for plaquette states: sites with counterclockwise
// parton slots, plaquette faces (parton cycles), and the inter-site edges
// recovered by pairing the per-site face crossings. An edge's two crossings
// carry the branching data that the symmetry construction must cancel.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "plaquette/group.hpp"

namespace plaq {

struct Site {
    int id = -1;
    std::vector<int> partons;  // parton ids, counterclockwise
};

struct Parton {
    int id = -1;
    int site = -1;
    int slot = -1;  // position within the site's ccw order
    int face = -1;  // -1 when the parton is in no face
};

struct Face {
    int id = -1;
    std::vector<int> cycle;  // parton ids in face order
};

// Crossing of one lattice edge at one endpoint site: the consecutive slot
// pair (pair, pair+1) whose partons sit in faces face_from -> face_to
// (counterclockwise around the site).
struct Crossing {
    int site = -1;
    int pair = -1;  // 0-based slot index i, partons (i, i+1 mod k*)
    int face_from = -1;
    int face_to = -1;
    int parton_from = -1;
    int parton_to = -1;
};

enum class EdgeOrientation { none, forward, backward };  // relative to crossing a

struct LatticeEdge {
    int id = -1;
    Crossing a, b;
    EdgeOrientation declared = EdgeOrientation::none;
};

struct ValidationReport {
    bool pass = true;
    std::vector<std::string> violations;

    void fail(std::string msg) {
        pass = false;
        violations.push_back(std::move(msg));
    }
    std::string str() const {
        std::string s;
        for (const auto& v : violations) s += v + "\n";
        return s;
    }
};

struct BranchingSets {
    std::vector<int> ia, ib;  // 1-based pair indices into {1..k*}
};

struct BranchingAssignment {
    std::map<int, std::string> sublattice;       // site id -> label
    std::map<std::string, BranchingSets> sets;   // label -> index sets

    // true if pair index (0-based) at this site is in {i_a}
    bool in_ia(int site, int pair0) const {
        const auto& bs = sets.at(sublattice.at(site));
        return std::find(bs.ia.begin(), bs.ia.end(), pair0 + 1) != bs.ia.end();
    }
};

class Lattice {
public:
    Lattice(std::vector<Site> sites, std::vector<Face> faces, bool periodic)
        : sites_(std::move(sites)), faces_(std::move(faces)), periodic_(periodic) {
        index();
    }

    const std::vector<Site>& sites() const { return sites_; }
    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<LatticeEdge>& edges() const { return edges_; }
    const std::vector<int>& boundary_faces() const { return boundary_faces_; }
    bool periodic() const { return periodic_; }

    const Site& site(int id) const { return sites_.at(site_pos_.at(id)); }
    const Face& face(int id) const { return faces_.at(face_pos_.at(id)); }
    const Parton& parton(int id) const { return partons_.at(parton_pos_.at(id)); }
    const std::vector<Parton>& partons() const { return partons_; }

    int k_star(int site_id) const { return static_cast<int>(site(site_id).partons.size()); }

    void set_declared_orientation(int edge_id, EdgeOrientation o) {
        edges_.at(static_cast<size_t>(edge_id)).declared = o;
    }

    // partons of the consecutive pair (i, i+1 mod k*) at a site
    std::pair<int, int> pair_partons(int site_id, int pair0) const {
        const auto& ps = site(site_id).partons;
        return {ps[static_cast<size_t>(pair0)], ps[static_cast<size_t>((pair0 + 1) % ps.size())]};
    }

    // Validates the structure and (re)derives edges and boundary sides.
    ValidationReport validate() {
        ValidationReport rep;
        edges_.clear();
        boundary_faces_.clear();

        for (const auto& s : sites_)
            if (s.partons.empty()) rep.fail("site " + std::to_string(s.id) + " has no partons");

        // parton-face uniqueness and face sanity
        std::map<int, int> parton_face;
        for (const auto& f : faces_) {
            if (f.cycle.size() < 3)
                rep.fail("face " + std::to_string(f.id) + " has fewer than 3 partons");
            std::set<int> seen;
            std::set<int> face_sites;
            for (size_t t = 0; t < f.cycle.size(); ++t) {
                int p = f.cycle[t];
                if (!parton_pos_.count(p)) {
                    rep.fail("face " + std::to_string(f.id) + " references unknown parton " +
                             std::to_string(p));
                    continue;
                }
                if (!seen.insert(p).second)
                    rep.fail("face " + std::to_string(f.id) + " repeats parton " + std::to_string(p));
                if (parton_face.count(p))
                    rep.fail("parton " + std::to_string(p) + " in multiple faces");
                parton_face[p] = f.id;
                face_sites.insert(parton(p).site);
                int q = f.cycle[(t + 1) % f.cycle.size()];
                if (parton_pos_.count(q) && parton(p).site == parton(q).site)
                    rep.fail("face " + std::to_string(f.id) +
                             " visits site " + std::to_string(parton(p).site) + " twice in a row");
            }
            if (face_sites.size() < 3)
                rep.fail("face " + std::to_string(f.id) + " visits fewer than 3 distinct sites");
        }
        if (!rep.pass) return rep;

        // collect crossings and pair them into edges
        std::vector<Crossing> crossings;
        for (const auto& s : sites_) {
            const int k = static_cast<int>(s.partons.size());
            for (int i = 0; i < k; ++i) {
                int p = s.partons[i];
                int q = s.partons[(i + 1) % k];
                if (p == q) continue;  // single-parton site
                int fp = parton(p).face, fq = parton(q).face;
                if (fp < 0 || fq < 0) continue;
                if (fp == fq) {
                    rep.fail("site " + std::to_string(s.id) + ": consecutive partons " +
                             std::to_string(p) + "," + std::to_string(q) + " share face " +
                             std::to_string(fp));
                    continue;
                }
                crossings.push_back({s.id, i, fp, fq, p, q});
            }
        }
        if (!rep.pass) return rep;

        // With counterclockwise face cycles and site orders the partner
        // crossing of (a in f -> b in f') sits at the site holding both
        // prev_f(a) and next_f'(b), in that reversed face order.
        std::map<std::pair<int, int>, size_t> by_site_pair;
        for (size_t c = 0; c < crossings.size(); ++c)
            by_site_pair[{crossings[c].site, crossings[c].pair}] = c;

        auto cycle_neighbor = [&](int face_id, int parton_id, int step) {
            const auto& cyc = face(face_id).cycle;
            const int n = static_cast<int>(cyc.size());
            for (int i = 0; i < n; ++i)
                if (cyc[static_cast<size_t>(i)] == parton_id)
                    return cyc[static_cast<size_t>(((i + step) % n + n) % n)];
            throw structural_error("parton not in face cycle");
        };

        std::vector<bool> used(crossings.size(), false);
        std::set<int> boundary;
        for (size_t u = 0; u < crossings.size(); ++u) {
            if (used[u]) continue;
            const Crossing& cu = crossings[u];
            const int x = cycle_neighbor(cu.face_from, cu.parton_from, -1);
            const int y = cycle_neighbor(cu.face_to, cu.parton_to, +1);
            size_t v = crossings.size();
            if (parton(x).site == parton(y).site) {
                const Site& sp = site(parton(y).site);
                const int k = static_cast<int>(sp.partons.size());
                if (sp.partons[static_cast<size_t>((parton(y).slot + 1) % k)] == x) {
                    auto it = by_site_pair.find({sp.id, parton(y).slot});
                    if (it != by_site_pair.end()) v = it->second;
                }
            }
            if (v == crossings.size()) {
                if (periodic_)
                    rep.fail("faces " + std::to_string(cu.face_from) + " and " +
                             std::to_string(cu.face_to) + " share no edge at site " +
                             std::to_string(cu.site));
                else {
                    boundary.insert(cu.face_from);
                    boundary.insert(cu.face_to);
                }
                used[u] = true;
                continue;
            }
            if (used[v] || v == u) {
                rep.fail("inconsistent edge pairing at site " + std::to_string(cu.site));
                used[u] = true;
                continue;
            }
            used[u] = used[v] = true;
            LatticeEdge e;
            e.id = static_cast<int>(edges_.size());
            e.a = cu;
            e.b = crossings[v];
            edges_.push_back(e);
        }
        if (!rep.pass) return rep;

        // every polygon side must be carried by exactly one edge; uncovered
        // sides are the boundary of an open lattice
        std::map<int, std::vector<int>> side_cover;
        for (const auto& f : faces_) side_cover[f.id].assign(f.cycle.size(), 0);
        auto pos_in = [&](int face_id, int parton_id) {
            const auto& cyc = face(face_id).cycle;
            for (size_t i = 0; i < cyc.size(); ++i)
                if (cyc[i] == parton_id) return static_cast<int>(i);
            return -1;
        };
        for (const auto& e : edges_) {
            const int n_from = static_cast<int>(face(e.a.face_from).cycle.size());
            const int i = pos_in(e.a.face_from, e.a.parton_from);
            side_cover[e.a.face_from][static_cast<size_t>((i - 1 + n_from) % n_from)]++;
            const int j = pos_in(e.a.face_to, e.a.parton_to);
            side_cover[e.a.face_to][static_cast<size_t>(j)]++;
        }
        for (const auto& [fid, cover] : side_cover) {
            for (size_t t = 0; t < cover.size(); ++t) {
                if (cover[t] == 1) continue;
                if (cover[t] > 1) {
                    rep.fail("face " + std::to_string(fid) + " side " + std::to_string(t) +
                             " carried by multiple edges");
                } else if (periodic_) {
                    rep.fail("face " + std::to_string(fid) + " side " + std::to_string(t) +
                             " not supported by any edge");
                } else {
                    boundary.insert(fid);
                }
            }
        }
        if (!rep.pass) return rep;

        boundary_faces_.assign(boundary.begin(), boundary.end());

        if (periodic_) {
            const long long euler = static_cast<long long>(sites_.size()) -
                                    static_cast<long long>(edges_.size()) +
                                    static_cast<long long>(faces_.size());
            if (euler != 0) {
                std::ostringstream os;
                os << "torus Euler check failed: V-E+F = " << sites_.size() << "-" << edges_.size()
                   << "+" << faces_.size() << " = " << euler;
                rep.fail(os.str());
            }
        }
        return rep;
    }

    // Membership-based cancellation check: across every edge exactly one
    // endpoint crossing may lie in {i_a} (the induced face arrows are then
    // parallel with opposite chirality).
    ValidationReport check_branching(const BranchingAssignment& br) const {
        ValidationReport rep;
        for (const auto& s : sites_) {
            auto it = br.sublattice.find(s.id);
            if (it == br.sublattice.end()) {
                rep.fail("site " + std::to_string(s.id) + " has no sublattice label");
                continue;
            }
            auto st = br.sets.find(it->second);
            if (st == br.sets.end()) {
                rep.fail("sublattice " + it->second + " has no index sets");
                continue;
            }
            const int k = static_cast<int>(s.partons.size());
            std::set<int> all;
            for (int i : st->second.ia) all.insert(i);
            for (int i : st->second.ib) all.insert(i);
            if (static_cast<int>(all.size()) !=
                    static_cast<int>(st->second.ia.size() + st->second.ib.size()) ||
                static_cast<int>(all.size()) != k || (k && (*all.begin() < 1 || *all.rbegin() > k)))
                rep.fail("sublattice " + it->second + ": {i_a},{i_b} do not partition {1.." +
                         std::to_string(k) + "}");
        }
        if (!rep.pass) return rep;
        for (const auto& e : edges_) {
            bool a_in_ia = br.in_ia(e.a.site, e.a.pair);
            bool b_in_ia = br.in_ia(e.b.site, e.b.pair);
            if (a_in_ia == b_in_ia)
                rep.fail("edge " + std::to_string(e.id) + " (sites " + std::to_string(e.a.site) +
                         "," + std::to_string(e.b.site) + "): induced orientations not parallel");
        }
        return rep;
    }

private:
    void index() {
        partons_.clear();
        site_pos_.clear();
        face_pos_.clear();
        parton_pos_.clear();
        for (size_t i = 0; i < sites_.size(); ++i) {
            if (!site_pos_.emplace(sites_[i].id, i).second)
                throw structural_error("duplicate site id " + std::to_string(sites_[i].id));
        }
        for (size_t i = 0; i < faces_.size(); ++i) {
            if (!face_pos_.emplace(faces_[i].id, i).second)
                throw structural_error("duplicate face id " + std::to_string(faces_[i].id));
        }
        for (const auto& s : sites_) {
            for (size_t slot = 0; slot < s.partons.size(); ++slot) {
                Parton p;
                p.id = s.partons[slot];
                p.site = s.id;
                p.slot = static_cast<int>(slot);
                if (!parton_pos_.emplace(p.id, partons_.size()).second)
                    throw structural_error("parton " + std::to_string(p.id) +
                                           " belongs to more than one site");
                partons_.push_back(p);
            }
        }
        for (const auto& f : faces_) {
            for (int pid : f.cycle) {
                auto it = parton_pos_.find(pid);
                if (it == parton_pos_.end())
                    throw structural_error("face " + std::to_string(f.id) +
                                           " references unknown parton " + std::to_string(pid));
                partons_[it->second].face = f.id;  // uniqueness re-checked in validate()
            }
        }
    }

    std::vector<Site> sites_;
    std::vector<Face> faces_;
    std::vector<Parton> partons_;
    std::vector<LatticeEdge> edges_;
    std::vector<int> boundary_faces_;
    bool periodic_ = true;
    std::map<int, size_t> site_pos_, face_pos_, parton_pos_;
};

// Finds {(I, {i_a}, {i_b})} by two-coloring the crossing slots along edges,
// lowest label/pair first. Sites sharing a class must end up with identical
// sets; a contradiction rejects the lattice instead of patching it.
inline BranchingAssignment derive_branching(
    const Lattice& l, const std::map<int, std::string>* classes = nullptr) {
    std::map<int, std::string> cls;
    if (classes) {
        cls = *classes;
        for (const auto& s : l.sites())
            if (!cls.count(s.id))
                throw std::invalid_argument("derive_branching: site " + std::to_string(s.id) +
                                            " missing from class map");
    } else {
        for (const auto& s : l.sites()) cls[s.id] = "S" + std::to_string(s.id);
    }

    using Slot = std::pair<std::string, int>;  // (class label, 0-based pair)
    std::map<Slot, std::vector<std::pair<Slot, int>>> adj;  // slot -> (other, edge id)
    for (const auto& e : l.edges()) {
        Slot sa{cls.at(e.a.site), e.a.pair};
        Slot sb{cls.at(e.b.site), e.b.pair};
        if (sa == sb)
            throw structural_error("derive_branching: edge " + std::to_string(e.id) +
                                   " constrains slot (" + sa.first + "," +
                                   std::to_string(sa.second + 1) + ") against itself");
        adj[sa].push_back({sb, e.id});
        adj[sb].push_back({sa, e.id});
    }

    // ensure every slot exists even if untouched by edges
    std::map<Slot, int> color;  // 0 = i_a, 1 = i_b, -1 = unset
    std::map<std::string, int> kstar;
    for (const auto& s : l.sites()) {
        auto& k = kstar[cls.at(s.id)];
        if (k == 0)
            k = l.k_star(s.id);
        else if (k != l.k_star(s.id))
            throw structural_error("derive_branching: class " + cls.at(s.id) +
                                   " mixes parton counts");
        for (int i = 0; i < l.k_star(s.id); ++i) color.emplace(Slot{cls.at(s.id), i}, -1);
    }

    auto propagate = [&](Slot start) {
        std::vector<Slot> stack{start};
        while (!stack.empty()) {
            Slot cur = stack.back();
            stack.pop_back();
            auto it = adj.find(cur);
            if (it == adj.end()) continue;
            for (const auto& [other, eid] : it->second) {
                int want = 1 - color.at(cur);
                int& oc = color.at(other);
                if (oc == -1) {
                    oc = want;
                    stack.push_back(other);
                } else if (oc != want) {
                    throw structural_error(
                        "derive_branching: no consistent assignment (conflict at edge " +
                        std::to_string(eid) + ")");
                }
            }
        }
    };

    // declared edge arrows seed the coloring at their crossings
    for (const auto& e : l.edges()) {
        if (e.declared == EdgeOrientation::none) continue;
        Slot sa{cls.at(e.a.site), e.a.pair};
        int want = (e.declared == EdgeOrientation::forward) ? 0 : 1;
        int& c = color.at(sa);
        if (c == -1) {
            c = want;
            propagate(sa);
        } else if (c != want) {
            throw structural_error("derive_branching: declared orientation of edge " +
                                   std::to_string(e.id) + " conflicts with other constraints");
        }
    }

    for (auto& [slot, c] : color) {
        if (c != -1) continue;
        c = 0;
        propagate(slot);
    }

    BranchingAssignment br;
    br.sublattice = cls;
    for (const auto& [slot, c] : color) {
        auto& bs = br.sets[slot.first];
        if (c == 0)
            bs.ia.push_back(slot.second + 1);
        else
            bs.ib.push_back(slot.second + 1);
    }
    for (auto& [label, bs] : br.sets) {
        std::sort(bs.ia.begin(), bs.ia.end());
        std::sort(bs.ib.begin(), bs.ib.end());
    }
    return br;
}

// Swaps the {i_a}/{i_b} membership of one crossing, as if the branched edge
// orientation had been flipped at one endpoint only. The affected site moves
// to a fresh sublattice so every other site keeps its operator.
inline BranchingAssignment flip_edge_orientation(const Lattice& l, const BranchingAssignment& br,
                                                 int edge_id) {
    const LatticeEdge& e = l.edges().at(static_cast<size_t>(edge_id));
    BranchingAssignment out = br;
    const std::string old_label = br.sublattice.at(e.a.site);
    const std::string new_label = old_label + "#flip" + std::to_string(edge_id);
    BranchingSets bs = br.sets.at(old_label);
    const int pair1 = e.a.pair + 1;
    auto ia = std::find(bs.ia.begin(), bs.ia.end(), pair1);
    if (ia != bs.ia.end()) {
        bs.ia.erase(ia);
        bs.ib.push_back(pair1);
    } else {
        bs.ib.erase(std::find(bs.ib.begin(), bs.ib.end(), pair1));
        bs.ia.push_back(pair1);
    }
    std::sort(bs.ia.begin(), bs.ia.end());
    std::sort(bs.ib.begin(), bs.ib.end());
    out.sublattice[e.a.site] = new_label;
    out.sets[new_label] = bs;
    return out;
}

}  // namespace plaq
