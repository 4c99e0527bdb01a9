#pragma once

// Entanglement-concentration planning: dashed lines through faces (one face
// per line segment, merges through same-site parton pairs), builtin patterns
// for the regular lattices, and a honeycomb-minor router with per-face
// capacity one.

#include <deque>
#include <random>
#include <set>

#include "plaquette/builtins.hpp"
#include "plaquette/mbqc.hpp"

namespace plaq {

struct routing_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DashedLine {
    std::vector<int> faces;                   // face ids along the line
    int endpoint_a = -1, endpoint_b = -1;     // surviving partons
    std::vector<std::pair<int, int>> merges;  // same-site parton pair per face step
    std::string kind() const { return faces.size() == 1 ? "O1" : "O2"; }
};

struct RoutingPlan {
    std::vector<DashedLine> lines;

    std::vector<std::pair<int, int>> target_edges(const Lattice& l) const {
        std::vector<std::pair<int, int>> out;
        for (const auto& ln : lines)
            out.push_back({l.parton(ln.endpoint_a).site, l.parton(ln.endpoint_b).site});
        return out;
    }
};

struct DilutedLattice {
    const Lattice* base;
    std::set<int> deleted_sites;

    bool alive_site(int s) const { return !deleted_sites.count(s); }
    bool alive_face(const Face& f) const {
        for (int p : f.cycle)
            if (!alive_site(base->parton(p).site)) return false;
        return true;
    }
};

inline std::set<int> random_dilution(const Lattice& l, double fraction, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::set<int> holes;
    for (const auto& s : l.sites())
        if (dist(rng) < fraction) holes.insert(s.id);
    return holes;
}

// structural invariants: at most one line per face, endpoints in the first
// and last face, merges through same-site parton pairs of consecutive faces
inline ValidationReport check_plan(const RoutingPlan& plan, const Lattice& l) {
    ValidationReport rep;
    std::map<int, int> face_usage;
    std::set<int> used_partons;
    for (size_t li = 0; li < plan.lines.size(); ++li) {
        const auto& ln = plan.lines[li];
        if (ln.faces.empty()) {
            rep.fail("line " + std::to_string(li) + " has no faces");
            continue;
        }
        for (int f : ln.faces)
            if (++face_usage[f] > 1) rep.fail("face " + std::to_string(f) + " used twice");
        if (ln.merges.size() + 1 != ln.faces.size())
            rep.fail("line " + std::to_string(li) + ": need one merge per face step");
        auto check_parton = [&](int p, int face, const char* what) {
            if (l.parton(p).face != face)
                rep.fail("line " + std::to_string(li) + ": " + what + " parton " +
                         std::to_string(p) + " not in face " + std::to_string(face));
            if (!used_partons.insert(p).second)
                rep.fail("parton " + std::to_string(p) + " used twice");
        };
        check_parton(ln.endpoint_a, ln.faces.front(), "endpoint");
        check_parton(ln.endpoint_b, ln.faces.back(), "endpoint");
        for (size_t mi = 0; mi < ln.merges.size() && mi + 1 < ln.faces.size(); ++mi) {
            const auto [p, q] = ln.merges[mi];
            check_parton(p, ln.faces[mi], "merge");
            check_parton(q, ln.faces[mi + 1], "merge");
            if (l.parton(p).site != l.parton(q).site)
                rep.fail("line " + std::to_string(li) + ": merge pair not on one site");
        }
    }
    return rep;
}

namespace detail {

inline int parton_of_site_in_face(const Lattice& l, int site, int face) {
    for (int p : l.site(site).partons)
        if (l.parton(p).face == face) return p;
    throw routing_error("site " + std::to_string(site) + " has no parton in face " +
                        std::to_string(face));
}

}  // namespace detail

// ---- builtin patterns ----

// `l` must be the builtin lattice tiled nx x ny (ids follow the tiling scheme)
inline RoutingPlan builtin_plan(const Lattice& l, const std::string& name, int nx, int ny) {
    RoutingPlan plan;
    auto line_o1 = [&](int face, int site_a, int site_b) {
        DashedLine ln;
        ln.faces = {face};
        ln.endpoint_a = detail::parton_of_site_in_face(l, site_a, face);
        ln.endpoint_b = detail::parton_of_site_in_face(l, site_b, face);
        plan.lines.push_back(std::move(ln));
    };
    auto mod = [](int a, int m) { return ((a % m) + m) % m; };

    if (name == "square") {
        if (nx % 2 || ny % 2)
            throw routing_error("square checkerboard pattern needs even nx, ny");
        auto site = [&](int x, int y) { return mod(y, ny) * nx + mod(x, nx); };
        auto face = [&](int x, int y) { return mod(y, ny) * nx + mod(x, nx); };
        // face (x,y) spans sites (x,y),(x+1,y),(x,y+1),(x+1,y+1); keep the
        // white diagonal (x+y even)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                if ((x + y) % 2 == 0)
                    line_o1(face(x, y), site(x, y), site(x + 1, y + 1));
                else
                    line_o1(face(x, y), site(x + 1, y), site(x, y + 1));
            }
    } else if (name == "triangular") {
        if (nx % 2 || ny % 2)
            throw routing_error("triangular brick pattern needs even nx, ny");
        auto site = [&](int x, int y) { return mod(y, ny) * nx + mod(x, nx); };
        auto faceU = [&](int x, int y) { return (mod(y, ny) * nx + mod(x, nx)) * 2 + 0; };
        auto faceD = [&](int x, int y) { return (mod(y, ny) * nx + mod(x, nx)) * 2 + 1; };
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                // D(x,y) hosts the brick rung between (x,y+1) and (x+1,y+1)
                line_o1(faceD(x, y), site(x, y + 1), site(x + 1, y + 1));
                // U(x,y) hosts the upright when x+y is even
                if ((x + y) % 2 == 0) line_o1(faceU(x, y), site(x, y), site(x, y + 1));
            }
    } else if (name == "honeycomb") {
        if (nx % 2 || ny % 2) throw routing_error("honeycomb pattern needs even nx, ny");
        auto siteA = [&](int x, int y) { return (mod(y, ny) * nx + mod(x, nx)) * 2 + 0; };
        auto siteB = [&](int x, int y) { return (mod(y, ny) * nx + mod(x, nx)) * 2 + 1; };
        auto face = [&](int x, int y) { return mod(y, ny) * nx + mod(x, nx); };
        // hubs u = A(2X,2Y), w = B(2X+1,2Y) joined through three hexagons
        for (int Y = 0; Y < ny / 2; ++Y)
            for (int X = 0; X < nx / 2; ++X) {
                const int x = 2 * X, y = 2 * Y;
                line_o1(face(x, y), siteA(x, y), siteB(x + 1, y));
                line_o1(face(x, y - 1), siteA(x, y), siteB(x + 1, y - 2));
                line_o1(face(x - 1, y), siteA(x, y), siteB(x - 1, y));
            }
    } else if (name == "kagome") {
        auto siteA = [&](int x, int y) { return (mod(y, ny) * nx + mod(x, nx)) * 3 + 0; };
        auto siteB = [&](int x, int y) { return (mod(y, ny) * nx + mod(x, nx)) * 3 + 1; };
        auto face = [&](int x, int y, int cls) {
            return (mod(y, ny) * nx + mod(x, nx)) * 3 + cls;
        };
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                line_o1(face(x, y, 0), siteA(x, y), siteB(x, y));          // T1
                line_o1(face(x, y, 1), siteB(x + 1, y), siteA(x, y + 1));  // T2
                line_o1(face(x, y, 2), siteA(x - 1, y), siteB(x, y));      // hexagon
            }
    } else {
        throw routing_error("no builtin plan for lattice '" + name + "'");
    }

    auto rep = check_plan(plan, l);
    if (!rep.pass) throw routing_error("builtin plan invalid:\n" + rep.str());
    return plan;
}

// ---- honeycomb-minor router ----

namespace detail {

inline RoutingPlan route_attempt(const Lattice& l, int nx, int ny, const std::set<int>& holes,
                                 int spacing, int ox, int oy) {

    DilutedLattice dl{&l, holes};
    auto mod = [](int a, int m) { return ((a % m) + m) % m; };
    auto site = [&](int x, int y) { return mod(y, ny) * nx + mod(x, nx); };

    // face alive + usage bookkeeping
    std::map<int, bool> face_ok;
    for (const auto& f : l.faces()) face_ok[f.id] = dl.alive_face(f);
    std::set<int> used_faces;
    std::set<int> used_partons;

    // adjacency of faces through shared alive sites
    std::map<int, std::vector<std::pair<int, int>>> face_adj;  // face -> (face, shared site)
    {
        std::map<int, std::vector<int>> faces_of_site;
        for (const auto& p : l.partons())
            if (p.face >= 0) faces_of_site[p.site].push_back(p.face);
        for (auto& [s, fs] : faces_of_site) {
            if (!dl.alive_site(s)) continue;
            std::sort(fs.begin(), fs.end());
            for (size_t i = 0; i < fs.size(); ++i)
                for (size_t j = 0; j < fs.size(); ++j)
                    if (i != j && face_ok[fs[i]] && face_ok[fs[j]])
                        face_adj[fs[i]].push_back({fs[j], s});
        }
    }

    // hub template: u(X,Y) at (sX, sY), w(X,Y) at (sX + s/2, sY + s/2),
    // snapped to the nearest healthy site (alive, >= 3 alive faces) when diluted
    auto healthy = [&](int s) {
        if (!dl.alive_site(s)) return false;
        int alive_faces = 0;
        for (int p : l.site(s).partons)
            if (l.parton(p).face >= 0 && face_ok[l.parton(p).face]) ++alive_faces;
        return alive_faces >= 3;
    };
    std::set<int> taken_hubs;
    auto snap = [&](int x, int y) -> int {
        if (healthy(site(x, y)) && !taken_hubs.count(site(x, y))) return site(x, y);
        // deterministic ring search by graph offset
        for (int radius = 1; radius <= spacing / 2; ++radius)
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != radius) continue;
                    const int cand = site(x + dx, y + dy);
                    if (healthy(cand) && !taken_hubs.count(cand)) return cand;
                }
        throw routing_error("no healthy hub site near (" + std::to_string(x) + "," +
                            std::to_string(y) + ")");
    };

    const int hx = nx / spacing, hy = ny / spacing;
    std::map<std::pair<int, int>, int> hub_u, hub_w;
    for (int Y = 0; Y < hy; ++Y)
        for (int X = 0; X < hx; ++X) {
            hub_u[{X, Y}] = snap(ox + spacing * X, oy + spacing * Y);
            taken_hubs.insert(hub_u[{X, Y}]);
            hub_w[{X, Y}] = snap(ox + spacing * X + spacing / 2, oy + spacing * Y + spacing / 2);
            taken_hubs.insert(hub_w[{X, Y}]);
        }

    std::vector<std::pair<int, int>> hub_edges;  // (site, site)
    std::set<int> hub_sites;
    for (int Y = 0; Y < hy; ++Y)
        for (int X = 0; X < hx; ++X) {
            hub_edges.push_back({hub_u[{X, Y}], hub_w[{X, Y}]});
            hub_edges.push_back({hub_w[{X, Y}], hub_u[{mod(X + 1, hx), Y}]});
            hub_edges.push_back({hub_w[{X, Y}], hub_u[{X, mod(Y + 1, hy)}]});
            hub_sites.insert(hub_u[{X, Y}]);
            hub_sites.insert(hub_w[{X, Y}]);
        }

    // faces incident to a hub stay reserved until that hub's three lines are in
    std::map<int, int> hub_of_face;  // face -> hub site
    std::map<int, int> hub_need;     // hub site -> lines not yet routed
    for (int s : hub_sites)
        for (int p : l.site(s).partons)
            if (l.parton(p).face >= 0) hub_of_face[l.parton(p).face] = s;
    for (const auto& [sa, sb] : hub_edges) {
        hub_need[sa]++;
        hub_need[sb]++;
    }

    // routed lines with tombstones so rip-up can retract them
    std::vector<DashedLine> lines;
    std::vector<std::pair<int, int>> line_edge;  // hub edge per line
    std::vector<bool> line_active;
    std::map<int, size_t> owner;  // face -> active line index

    // foreign hub faces carry no hard reservation: a starved hub recovers
    // its faces through rip-up instead
    auto allowed_for = [&](int, int, int) { return true; };

    // corridor search over free faces, weighted by the congestion history so
    // re-routed lines spread out instead of fighting over the same faces
    std::map<int, int> history;
    auto try_route = [&](int sa, int sb) -> bool {
        if (sa == sb) throw routing_error("hub collision after snapping; spacing too small");
        std::map<int, std::pair<int, int>> parent;  // face -> (prev face, shared site)
        std::map<int, int> dist;
        std::set<std::pair<int, int>> heap;
        for (int p : l.site(sa).partons) {
            const int f = l.parton(p).face;
            if (f >= 0 && face_ok[f] && !used_faces.count(f) && !used_partons.count(p) &&
                allowed_for(sa, sb, f) && !dist.count(f)) {
                parent[f] = {-1, -1};
                dist[f] = 1 + history[f];
                heap.insert({dist[f], f});
            }
        }
        int goal = -1;
        std::set<int> done;
        while (!heap.empty()) {
            auto [c, f] = *heap.begin();
            heap.erase(heap.begin());
            if (!done.insert(f).second) continue;
            bool is_goal = false;
            for (int p : l.site(sb).partons)
                if (l.parton(p).face == f && !used_partons.count(p)) is_goal = true;
            if (is_goal) {
                goal = f;
                break;
            }
            auto it = face_adj.find(f);
            if (it == face_adj.end()) continue;
            for (const auto& [nf, via] : it->second) {
                if (done.count(nf) || used_faces.count(nf) || !face_ok[nf] ||
                    !allowed_for(sa, sb, nf))
                    continue;
                const int nc = c + 1 + history[nf];
                auto have = dist.find(nf);
                if (have == dist.end() || nc < have->second) {
                    dist[nf] = nc;
                    parent[nf] = {f, via};
                    heap.insert({nc, nf});
                }
            }
        }
        if (goal < 0) return false;

        std::vector<int> faces;
        std::vector<int> vias;
        for (int f = goal; f >= 0;) {
            faces.push_back(f);
            auto [pf, via] = parent.at(f);
            if (pf >= 0) vias.push_back(via);
            f = pf;
        }
        std::reverse(faces.begin(), faces.end());
        std::reverse(vias.begin(), vias.end());

        DashedLine ln;
        ln.faces = faces;
        ln.endpoint_a = detail::parton_of_site_in_face(l, sa, faces.front());
        ln.endpoint_b = detail::parton_of_site_in_face(l, sb, faces.back());
        for (size_t i = 0; i < vias.size(); ++i)
            ln.merges.push_back({detail::parton_of_site_in_face(l, vias[i], faces[i]),
                                 detail::parton_of_site_in_face(l, vias[i], faces[i + 1])});
        used_partons.insert(ln.endpoint_a);
        used_partons.insert(ln.endpoint_b);
        for (const auto& [p, q] : ln.merges) {
            used_partons.insert(p);
            used_partons.insert(q);
        }
        for (int f : faces) {
            used_faces.insert(f);
            owner[f] = lines.size();
        }
        line_edge.push_back({sa, sb});
        line_active.push_back(true);
        lines.push_back(std::move(ln));
        hub_need[sa]--;
        hub_need[sb]--;
        return true;
    };

    auto rip = [&](size_t idx) {
        const auto& ln = lines[idx];
        line_active[idx] = false;
        for (int f : ln.faces) {
            used_faces.erase(f);
            owner.erase(f);
        }
        used_partons.erase(ln.endpoint_a);
        used_partons.erase(ln.endpoint_b);
        for (const auto& [p, q] : ln.merges) {
            used_partons.erase(p);
            used_partons.erase(q);
        }
        hub_need[line_edge[idx].first]++;
        hub_need[line_edge[idx].second]++;
    };

    // shortest corridor over free faces only (probe for ordering)
    auto probe_length = [&](int sa, int sb) -> int {
        std::map<int, int> dist;
        std::deque<int> queue;
        for (int p : l.site(sa).partons) {
            const int f = l.parton(p).face;
            if (f >= 0 && face_ok[f] && !used_faces.count(f) && !dist.count(f)) {
                dist[f] = 1;
                queue.push_back(f);
            }
        }
        while (!queue.empty()) {
            const int f = queue.front();
            queue.pop_front();
            for (int p : l.site(sb).partons)
                if (l.parton(p).face == f) return dist[f];
            auto it = face_adj.find(f);
            if (it == face_adj.end()) continue;
            for (const auto& [nf, via] : it->second) {
                if (dist.count(nf) || used_faces.count(nf) || !face_ok[nf]) continue;
                dist[nf] = dist[f] + 1;
                queue.push_back(nf);
            }
        }
        return 1 << 20;
    };

    // desperation corridor: used faces are traversable at a penalty that
    // grows every time they are fought over, so rip cycles settle; returns
    // the owning lines that block the cheapest corridor
    auto blocking_lines = [&](int sa, int sb) -> std::vector<size_t> {
        std::map<int, int> cost;
        std::map<int, int> prev;
        for (int p : l.site(sa).partons) {
            const int f = l.parton(p).face;
            if (f < 0 || !face_ok[f] || cost.count(f) || !allowed_for(sa, sb, f)) continue;
            cost[f] = used_faces.count(f) ? 1 + history[f] : 0;
            prev[f] = -1;
        }
        // Dijkstra over small weights via repeated relaxation
        std::set<std::pair<int, int>> heap;
        for (const auto& [f, c] : cost) heap.insert({c, f});
        int goal = -1;
        std::set<int> done;
        while (!heap.empty()) {
            auto [c, f] = *heap.begin();
            heap.erase(heap.begin());
            if (!done.insert(f).second) continue;
            bool is_goal = false;
            for (int p : l.site(sb).partons)
                if (l.parton(p).face == f) is_goal = true;
            if (is_goal) {
                goal = f;
                break;
            }
            auto it = face_adj.find(f);
            if (it == face_adj.end()) continue;
            for (const auto& [nf, via] : it->second) {
                if (!face_ok[nf] || done.count(nf) || !allowed_for(sa, sb, nf)) continue;
                const int nc = c + (used_faces.count(nf) ? 1 + history[nf] : 0);
                auto have = cost.find(nf);
                if (have == cost.end() || nc < have->second) {
                    cost[nf] = nc;
                    prev[nf] = f;
                    heap.insert({nc, nf});
                }
            }
        }
        std::vector<size_t> victims;
        if (goal < 0) return victims;
        for (int f = goal; f >= 0; f = prev.count(f) ? prev[f] : -1) {
            auto it = owner.find(f);
            if (it != owner.end()) victims.push_back(it->second);
            if (prev[f] < 0) break;
        }
        std::sort(victims.begin(), victims.end());
        victims.erase(std::unique(victims.begin(), victims.end()), victims.end());
        return victims;
    };

    // cheapest-first routing with rip-up-and-reroute on failure
    std::deque<std::pair<int, int>> unrouted(hub_edges.begin(), hub_edges.end());
    int rip_budget = 600;
    int stall_guard = 20000;
    while (!unrouted.empty()) {
        if (--stall_guard < 0) throw routing_error("routing did not converge");
        size_t best = 0;
        int best_len = 1 << 20;
        for (size_t i = 0; i < unrouted.size(); ++i) {
            const int len = probe_length(unrouted[i].first, unrouted[i].second);
            if (len < best_len) {
                best_len = len;
                best = i;
            }
        }
        auto edge = unrouted[best];
        if (best_len < (1 << 20)) {
            unrouted.erase(unrouted.begin() + static_cast<std::ptrdiff_t>(best));
            if (!try_route(edge.first, edge.second)) unrouted.push_back(edge);
            continue;
        }
        // nothing routes freely: rip the lines blocking the cheapest corridor
        auto victims = blocking_lines(edge.first, edge.second);
        if (victims.empty())
            throw routing_error("no face-disjoint path between hub sites " +
                                std::to_string(edge.first) + " and " +
                                std::to_string(edge.second));
        if (rip_budget - static_cast<int>(victims.size()) < 0)
            throw routing_error("rip budget exhausted between hub sites " +
                                std::to_string(edge.first) + " and " +
                                std::to_string(edge.second));
        rip_budget -= static_cast<int>(victims.size());
        for (size_t idx : victims) {
            for (int f : lines[idx].faces) history[f]++;
            rip(idx);
            unrouted.push_back(line_edge[idx]);
        }
    }

    RoutingPlan plan;
    for (size_t i = 0; i < lines.size(); ++i)
        if (line_active[i]) plan.lines.push_back(lines[i]);

    auto rep = check_plan(plan, l);
    if (!rep.pass) throw routing_error("routed plan invalid:\n" + rep.str());
    return plan;
}

}  // namespace detail

// Routes a honeycomb hub pattern on a (possibly diluted) square-lattice
// torus. Hub placement is free, so on failure the whole template is retried
// at translated offsets before giving up; the result is deterministic for a
// fixed (lattice, holes, spacing).
inline RoutingPlan route_honeycomb_minor(const Lattice& l, int nx, int ny,
                                         const std::set<int>& holes, int spacing) {
    if (spacing < 2 || spacing % 2) throw routing_error("spacing must be even and >= 2");
    if (nx % spacing || ny % spacing)
        throw routing_error("lattice dimensions must be multiples of the spacing");
    std::string last_error;
    for (int oy = 0; oy < spacing; ++oy)
        for (int ox = 0; ox < spacing; ++ox) {
            try {
                return detail::route_attempt(l, nx, ny, holes, spacing, ox, oy);
            } catch (const routing_error& e) {
                last_error = e.what();
            }
        }
    throw routing_error("routing failed at every hub offset; last: " + last_error);
}

// ---- compilation and execution ----

// per-line measurement plan: merges first, then X-measurements on every
// remaining non-endpoint parton of the line's faces
inline MeasurementPlan compile_line(const Lattice& l, const DashedLine& ln) {
    MeasurementPlan mp;
    std::set<int> keep = {ln.endpoint_a, ln.endpoint_b};
    for (const auto& [p, q] : ln.merges) {
        mp.add_merge(p, q);
        keep.insert(p);
        keep.insert(q);
    }
    for (int f : ln.faces)
        for (int p : l.face(f).cycle)
            if (!keep.count(p)) mp.add_x(p);
    return mp;
}

// whole-lattice measurement plan (lines plus removal of unused faces)
inline MeasurementPlan compile_plan(const Lattice& l, const RoutingPlan& plan) {
    auto rep = check_plan(plan, l);
    if (!rep.pass) throw routing_error("compile_plan: invalid plan:\n" + rep.str());
    MeasurementPlan mp;
    std::set<int> used_faces;
    for (const auto& ln : plan.lines) {
        auto part = compile_line(l, ln);
        mp.steps.insert(mp.steps.end(), part.steps.begin(), part.steps.end());
        used_faces.insert(ln.faces.begin(), ln.faces.end());
    }
    for (const auto& f : l.faces())
        if (!used_faces.count(f.id))
            for (int p : f.cycle) mp.add_x(p);
    return mp;
}

struct LineExecution {
    std::pair<int, int> bond;
    std::vector<ReductionBranch> branches;
};

// Executes each line on its own face cluster (the plaquette state is a
// product over faces, and lines are face-disjoint, so clusters factorize).
inline std::vector<LineExecution> execute_plan(const Lattice& l, int d, const RoutingPlan& plan,
                                               const Policy& policy) {
    std::vector<LineExecution> out;
    std::uint64_t salt = 0;
    for (const auto& ln : plan.lines) {
        std::vector<std::vector<int>> faces;
        std::vector<int> partons;
        for (int f : ln.faces) {
            faces.push_back(l.face(f).cycle);
            partons.insert(partons.end(), l.face(f).cycle.begin(), l.face(f).cycle.end());
        }
        SparseState cluster(d, partons);
        {
            // product of GHZ faces restricted to this cluster
            std::vector<int> h(faces.size(), 0);
            const double amp =
                std::pow(static_cast<double>(d), -0.5 * static_cast<double>(faces.size()));
            while (true) {
                std::string key(partons.size(), '\0');
                for (size_t fi = 0; fi < faces.size(); ++fi)
                    for (int p : faces[fi])
                        key[static_cast<size_t>(cluster.parton_index(p))] =
                            static_cast<char>(h[fi]);
                cluster.amps()[key] = amp;
                size_t fi = 0;
                for (; fi < faces.size(); ++fi) {
                    if (++h[fi] < d) break;
                    h[fi] = 0;
                }
                if (fi == faces.size()) break;
            }
        }
        Policy line_policy = policy;
        if (policy.mode == Policy::Mode::sampled) line_policy.seed = policy.seed + salt++;
        auto branches = reduce_faces(cluster, faces, compile_line(l, ln), line_policy);
        out.push_back({{ln.endpoint_a, ln.endpoint_b}, std::move(branches)});
    }
    return out;
}

// ---- small-graph isomorphism (structural target checks) ----

struct SimpleGraph {
    int n = 0;
    std::vector<std::set<int>> adj;

    void add_edge(int a, int b) {
        adj[static_cast<size_t>(a)].insert(b);
        adj[static_cast<size_t>(b)].insert(a);
    }
};

inline SimpleGraph graph_from_edges(const std::vector<std::pair<int, int>>& edges) {
    std::map<int, int> index;
    for (const auto& [a, b] : edges) {
        index.emplace(a, static_cast<int>(index.size()));
        index.emplace(b, static_cast<int>(index.size()));
    }
    SimpleGraph g;
    g.n = static_cast<int>(index.size());
    g.adj.resize(static_cast<size_t>(g.n));
    for (const auto& [a, b] : edges) g.add_edge(index.at(a), index.at(b));
    return g;
}

inline bool isomorphic(const SimpleGraph& a, const SimpleGraph& b) {
    if (a.n != b.n) return false;
    std::vector<size_t> deg_a, deg_b;
    for (const auto& s : a.adj) deg_a.push_back(s.size());
    for (const auto& s : b.adj) deg_b.push_back(s.size());
    auto sa = deg_a, sb = deg_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;

    std::vector<int> map_ab(static_cast<size_t>(a.n), -1), map_ba(static_cast<size_t>(b.n), -1);
    // order vertices of a by connectivity to already-mapped ones
    std::vector<int> order;
    {
        std::set<int> seen;
        std::deque<int> q;
        for (int start = 0; start < a.n; ++start) {
            if (seen.count(start)) continue;
            q.push_back(start);
            seen.insert(start);
            while (!q.empty()) {
                int v = q.front();
                q.pop_front();
                order.push_back(v);
                for (int w : a.adj[static_cast<size_t>(v)])
                    if (seen.insert(w).second) q.push_back(w);
            }
        }
    }

    std::function<bool(size_t)> rec = [&](size_t pos) -> bool {
        if (pos == order.size()) return true;
        const int v = order[pos];
        for (int w = 0; w < b.n; ++w) {
            if (map_ba[static_cast<size_t>(w)] >= 0) continue;
            if (deg_a[static_cast<size_t>(v)] != deg_b[static_cast<size_t>(w)]) continue;
            bool ok = true;
            for (int vn : a.adj[static_cast<size_t>(v)]) {
                const int wn = map_ab[static_cast<size_t>(vn)];
                if (wn >= 0 && !b.adj[static_cast<size_t>(w)].count(wn)) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                for (int wn : b.adj[static_cast<size_t>(w)]) {
                    const int vn = map_ba[static_cast<size_t>(wn)];
                    if (vn >= 0 && !a.adj[static_cast<size_t>(v)].count(vn)) {
                        ok = false;
                        break;
                    }
                }
            if (!ok) continue;
            map_ab[static_cast<size_t>(v)] = w;
            map_ba[static_cast<size_t>(w)] = v;
            if (rec(pos + 1)) return true;
            map_ab[static_cast<size_t>(v)] = -1;
            map_ba[static_cast<size_t>(w)] = -1;
        }
        return false;
    };
    return rec(0);
}

// reference tori, with a twist parameter on the vertical wrap to cover the
// sheared sublattices that checkerboard-style reductions produce
inline SimpleGraph square_torus_graph(int a, int b, int twist) {
    SimpleGraph g;
    g.n = a * b;
    g.adj.resize(static_cast<size_t>(g.n));
    auto id = [&](int i, int j) {
        j = ((j % b) + b) % b;
        i = ((i % a) + a) % a;
        return j * a + i;
    };
    for (int j = 0; j < b; ++j)
        for (int i = 0; i < a; ++i) {
            g.add_edge(id(i, j), id(i + 1, j));
            const int ii = (j == b - 1) ? i + twist : i;
            g.add_edge(id(i, j), id(ii, j + 1));
        }
    return g;
}

inline SimpleGraph honeycomb_torus_graph(int a, int b, int twist) {
    SimpleGraph g;
    g.n = 2 * a * b;
    g.adj.resize(static_cast<size_t>(g.n));
    auto idA = [&](int i, int j) {
        j = ((j % b) + b) % b;
        i = ((i % a) + a) % a;
        return 2 * (j * a + i);
    };
    auto idB = [&](int i, int j) {
        j = ((j % b) + b) % b;
        i = ((i % a) + a) % a;
        return 2 * (j * a + i) + 1;
    };
    for (int j = 0; j < b; ++j)
        for (int i = 0; i < a; ++i) {
            g.add_edge(idB(i, j), idA(i, j));
            g.add_edge(idB(i, j), idA(i + 1, j));
            const int ii = (j == b - 1) ? i + twist : i;
            g.add_edge(idB(i, j), idA(ii, j + 1));
        }
    return g;
}

inline bool is_square_torus(const SimpleGraph& g) {
    for (int a = 1; a <= g.n; ++a) {
        if (g.n % a) continue;
        const int b = g.n / a;
        for (int twist = 0; twist < a; ++twist)
            if (isomorphic(g, square_torus_graph(a, b, twist))) return true;
    }
    return false;
}

inline bool is_honeycomb_torus(const SimpleGraph& g) {
    if (g.n % 2) return false;
    const int cells = g.n / 2;
    for (int a = 1; a <= cells; ++a) {
        if (cells % a) continue;
        const int b = cells / a;
        for (int twist = 0; twist < a; ++twist)
            if (isomorphic(g, honeycomb_torus_graph(a, b, twist))) return true;
    }
    return false;
}

}  // namespace plaq
