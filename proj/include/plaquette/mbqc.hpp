#pragma once

// Measurement pipeline: plaquette -> valence-bond reduction with byproduct
// tracking, valence-bond -> cluster conversion, cluster verification, and
// gate teleportation through twisted Bell/GHZ bases.
//
// Frame conventions: a tracked state always satisfies
//     raw = (prod_q X^x_q Z^z_q) |ideal>     (up to global phase)
// and every rule below preserves that identity:
//   * X-measuring parton p with outcome m on a GHZ cluster contributes
//     Z^{-(m - z_p)} on a surviving member; an x frame on p drops out.
//   * Bell-merging (p, q) with outcome (a, b) acts like the frameless merge
//     with effective (a - z_p - z_q, b - x_p + x_q); it leaves Z^{-a_eff}
//     on one survivor and X^{-b_eff} on every survivor of q's cluster.
//   * A Fourier gate turns a frame (x, z) into (-z, x).
//   * The logical projection turns parton frames into logical Z frames:
//     z_L(s) = sum_{p in s} z_p - sum_{p bonded into s} (m_p + x_p).

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "plaquette/bases.hpp"
#include "plaquette/frame.hpp"

namespace plaq {

struct plan_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- policies ----

struct Policy {
    enum class Mode { exhaustive, sampled, forced };
    Mode mode = Mode::exhaustive;
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> forced;  // one outcome per measurement step

    static Policy exhaustive() { return {}; }
    static Policy sampled(std::uint64_t seed) { return {Mode::sampled, seed, {}}; }
    static Policy force(std::vector<std::vector<int>> outcomes) {
        return {Mode::forced, 0, std::move(outcomes)};
    }
};

// ---- measurement plans ----

struct MeasurementPlan {
    struct Step {
        std::string basis;         // "x_tilde" | "bell"
        std::vector<int> targets;  // one parton, or a merge pair
    };
    std::vector<Step> steps;

    void add_x(int parton) { steps.push_back({"x_tilde", {parton}}); }
    void add_merge(int p, int q) { steps.push_back({"bell", {p, q}}); }
};

// ---- reduction to valence bonds ----

struct ReductionBranch {
    SparseState state;  // surviving partons
    PauliFrame frame;   // on surviving partons
    std::vector<MeasurementRecord> records;
    std::vector<std::pair<int, int>> bonds;  // surviving parton pair per cluster
    double probability = 1.0;
};

namespace detail {

struct ClusterTracker {
    std::map<int, int> cluster_of;          // live parton -> root face index
    std::map<int, std::set<int>> members;   // root -> live partons

    explicit ClusterTracker(const std::vector<std::vector<int>>& faces) {
        for (size_t f = 0; f < faces.size(); ++f)
            for (int p : faces[f]) {
                if (cluster_of.count(p))
                    throw plan_error("parton " + std::to_string(p) + " in two faces");
                cluster_of[p] = static_cast<int>(f);
                members[static_cast<int>(f)].insert(p);
            }
    }

    int root(int parton) const {
        auto it = cluster_of.find(parton);
        if (it == cluster_of.end())
            throw plan_error("parton " + std::to_string(parton) + " not live in any face");
        return it->second;
    }

    void merge(int ra, int rb) {
        if (ra == rb) throw plan_error("merge within one cluster");
        for (int p : members[rb]) cluster_of[p] = ra;
        members[ra].insert(members[rb].begin(), members[rb].end());
        members.erase(rb);
    }

    void remove(int parton) {
        int r = root(parton);
        members[r].erase(parton);
        cluster_of.erase(parton);
        if (members[r].empty()) members.erase(r);
    }
};

}  // namespace detail

// Core engine: executes x_tilde / bell steps on a product of GHZ faces,
// tracking frames per the rules above. `faces` lists the parton cycle of
// every face of the input state.
inline std::vector<ReductionBranch> reduce_faces(const SparseState& input,
                                                 const std::vector<std::vector<int>>& faces,
                                                 const MeasurementPlan& plan, const Policy& policy,
                                                 const PauliFrame* initial_frame = nullptr) {
    const int d = input.d();

    // static plan validation: every cluster must end with 0 or 2 live partons
    {
        detail::ClusterTracker sim(faces);
        for (const auto& step : plan.steps) {
            if (step.basis == "x_tilde") {
                if (step.targets.size() != 1) throw plan_error("x_tilde step takes one parton");
                sim.remove(step.targets[0]);
            } else if (step.basis == "bell") {
                if (step.targets.size() != 2) throw plan_error("bell step takes a parton pair");
                int ra = sim.root(step.targets[0]);
                int rb = sim.root(step.targets[1]);
                if (ra == rb) throw plan_error("bell merge targets lie on the same face cluster");
                sim.merge(ra, rb);
                sim.remove(step.targets[0]);
                sim.remove(step.targets[1]);
            } else {
                throw plan_error("unknown plan basis '" + step.basis + "'");
            }
        }
        for (const auto& [root, live] : sim.members)
            if (live.size() != 2)
                throw plan_error("face cluster " + std::to_string(root) + " ends with " +
                                 std::to_string(live.size()) + " unmeasured partons");
    }

    if (policy.mode == Policy::Mode::forced && policy.forced.size() != plan.steps.size())
        throw plan_error("forced policy needs one outcome per step");

    struct Work {
        SparseState state;
        PauliFrame frame;
        std::vector<MeasurementRecord> records;
        detail::ClusterTracker clusters;
        double probability;
    };

    std::mt19937_64 rng(policy.seed);
    std::vector<Work> pending{{input, initial_frame ? *initial_frame : PauliFrame(d),
                               {}, detail::ClusterTracker(faces), 1.0}};

    const auto xb = basis_x_tilde(d);
    const auto bell = basis_bell(d);

    for (size_t si = 0; si < plan.steps.size(); ++si) {
        const auto& step = plan.steps[si];
        std::vector<Work> next;
        for (auto& w : pending) {
            std::vector<MeasureBranch> branches;
            if (step.basis == "x_tilde")
                branches = measure_all(w.state, step.targets, xb);
            else
                branches = measure_all(w.state, step.targets, bell);

            if (policy.mode == Policy::Mode::sampled) {
                double total = 0;
                for (const auto& b : branches) total += b.probability;
                std::uniform_real_distribution<double> dist(0.0, total);
                double r = dist(rng);
                size_t pick = branches.size() - 1;
                for (size_t i = 0; i < branches.size(); ++i) {
                    r -= branches[i].probability;
                    if (r <= 0) {
                        pick = i;
                        break;
                    }
                }
                branches = {std::move(branches[pick])};
            } else if (policy.mode == Policy::Mode::forced) {
                bool found = false;
                for (auto& b : branches)
                    if (b.record.outcome == policy.forced[si]) {
                        branches = {std::move(b)};
                        found = true;
                        break;
                    }
                if (!found) throw outcome_error("forced outcome has zero probability");
            }

            for (auto& b : branches) {
                Work nw{std::move(b.state), w.frame, w.records, w.clusters,
                        w.probability * b.probability};
                nw.records.push_back(b.record);

                if (step.basis == "x_tilde") {
                    const int p = step.targets[0];
                    const int m = b.record.outcome[0];
                    const auto [xp, zp] = nw.frame.at(p);
                    nw.frame.ops.erase(p);
                    const int root = nw.clusters.root(p);
                    nw.clusters.remove(p);
                    auto it = nw.clusters.members.find(root);
                    if (it != nw.clusters.members.end() && !it->second.empty())
                        nw.frame.add_z(*it->second.begin(), -(m - zp));
                } else {
                    const int p = step.targets[0];
                    const int q = step.targets[1];
                    const int a = b.record.outcome[0];
                    const int bb = b.record.outcome[1];
                    const auto [xp, zp] = nw.frame.at(p);
                    const auto [xq, zq] = nw.frame.at(q);
                    nw.frame.ops.erase(p);
                    nw.frame.ops.erase(q);
                    const int a_eff = a - zp - zq;
                    const int b_eff = bb - xp + xq;
                    const int rp = nw.clusters.root(p);
                    const int rq = nw.clusters.root(q);
                    std::set<int> q_side = nw.clusters.members.at(rq);
                    q_side.erase(q);
                    nw.clusters.merge(rp, rq);
                    nw.clusters.remove(p);
                    nw.clusters.remove(q);
                    // X^{-b_eff} on every survivor of q's former cluster,
                    // Z^{-a_eff} on any survivor of the merged cluster
                    for (int s : q_side) nw.frame.add_x(s, -b_eff);
                    auto it = nw.clusters.members.find(rp);
                    if (it != nw.clusters.members.end() && !it->second.empty())
                        nw.frame.add_z(*it->second.begin(), -a_eff);
                }
                next.push_back(std::move(nw));
            }
        }
        pending = std::move(next);
    }

    std::vector<ReductionBranch> out;
    for (auto& w : pending) {
        ReductionBranch rb{std::move(w.state), std::move(w.frame), std::move(w.records), {},
                           w.probability};
        for (const auto& [root, live] : w.clusters.members) {
            auto it = live.begin();
            int p1 = *it++;
            int p2 = *it;
            rb.bonds.push_back({p1, p2});
        }
        out.push_back(std::move(rb));
    }
    return out;
}

inline std::vector<ReductionBranch> reduce_to_bonds(const SparseState& s, const Lattice& l,
                                                    const MeasurementPlan& plan,
                                                    const Policy& policy) {
    std::vector<std::vector<int>> faces;
    for (const auto& f : l.faces()) faces.push_back(f.cycle);
    return reduce_faces(s, faces, plan, policy);
}

// Bell-basis merge of two plaquettes through a same-site parton pair (O2)
inline std::vector<ReductionBranch> merge_plaquettes(const SparseState& s, const Lattice& l,
                                                     int p, int q, const Policy& policy) {
    const Parton& pp = l.parton(p);
    const Parton& pq = l.parton(q);
    if (pp.site != pq.site) throw plan_error("merge partons must lie on the same site");
    if (pp.face < 0 || pq.face < 0 || pp.face == pq.face)
        throw plan_error("merge partons must lie on two distinct faces");
    MeasurementPlan plan;
    plan.add_merge(p, q);
    // merging alone leaves more than two live partons per cluster, so run the
    // engine without the final bond-count validation
    std::vector<std::vector<int>> faces;
    for (const auto& f : l.faces()) faces.push_back(f.cycle);

    const int d = s.d();
    std::mt19937_64 rng(policy.seed);
    const auto bell = basis_bell(d);
    auto branches = measure_all(s, {p, q}, bell);
    if (policy.mode == Policy::Mode::forced) {
        for (auto& b : branches)
            if (b.record.outcome == policy.forced.at(0)) {
                branches = {std::move(b)};
                break;
            }
        if (branches.size() != 1) throw outcome_error("forced outcome has zero probability");
    } else if (policy.mode == Policy::Mode::sampled) {
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        double r = dist(rng);
        size_t pick = branches.size() - 1;
        for (size_t i = 0; i < branches.size(); ++i) {
            r -= branches[i].probability;
            if (r <= 0) {
                pick = i;
                break;
            }
        }
        branches = {std::move(branches[pick])};
    }
    std::vector<ReductionBranch> out;
    for (auto& b : branches) {
        ReductionBranch rb{std::move(b.state), PauliFrame(d), {b.record}, {}, b.probability};
        const int a = b.record.outcome[0];
        const int bb = b.record.outcome[1];
        std::set<int> q_side(l.face(pq.face).cycle.begin(), l.face(pq.face).cycle.end());
        q_side.erase(q);
        for (int survivor : q_side) rb.frame.add_x(survivor, -bb);
        std::set<int> p_side(l.face(pp.face).cycle.begin(), l.face(pp.face).cycle.end());
        p_side.erase(p);
        rb.frame.add_z(*p_side.begin(), -a);
        out.push_back(std::move(rb));
    }
    return out;
}

// ---- valence-bond layouts and cluster conversion ----

struct BondGraph {
    std::map<int, std::vector<int>> site_partons;  // logical site -> its bond ends
    std::vector<std::pair<int, int>> bonds;        // parton pairs

    int site_of(int parton) const {
        for (const auto& [s, ps] : site_partons)
            if (std::find(ps.begin(), ps.end(), parton) != ps.end()) return s;
        throw std::invalid_argument("BondGraph: parton " + std::to_string(parton) +
                                    " on no site");
    }

    int partner(int parton) const {
        for (const auto& [a, b] : bonds) {
            if (a == parton) return b;
            if (b == parton) return a;
        }
        return -1;  // dangling parton (open chain end)
    }

    std::vector<std::pair<int, int>> logical_edges() const {
        std::vector<std::pair<int, int>> out;
        for (const auto& [a, b] : bonds) out.push_back({site_of(a), site_of(b)});
        return out;
    }
};

// product of |B> bonds, dangling partons in |+>
inline SparseState bond_state(int d, const BondGraph& g) {
    std::vector<int> partons;
    for (const auto& [s, ps] : g.site_partons)
        partons.insert(partons.end(), ps.begin(), ps.end());
    SparseState s(d, partons);
    std::set<int> bonded;
    for (const auto& [a, b] : g.bonds) {
        bonded.insert(a);
        bonded.insert(b);
    }
    // enumerate assignments: one digit per bond plus one per dangling parton
    std::vector<std::vector<int>> groups;
    for (const auto& [a, b] : g.bonds) groups.push_back({a, b});
    for (int p : partons)
        if (!bonded.count(p)) groups.push_back({p});
    std::vector<int> digit(groups.size(), 0);
    const double amp = std::pow(static_cast<double>(d), -0.5 * static_cast<double>(groups.size()));
    while (true) {
        std::string key(partons.size(), '\0');
        for (size_t gi = 0; gi < groups.size(); ++gi)
            for (int p : groups[gi])
                key[static_cast<size_t>(s.parton_index(p))] = static_cast<char>(digit[gi]);
        s.amps()[key] = amp;
        size_t gi = 0;
        for (; gi < groups.size(); ++gi) {
            if (++digit[gi] < d) break;
            digit[gi] = 0;
        }
        if (gi == groups.size()) break;
    }
    return s;
}

struct LogicalRegister {
    std::map<int, int> logical_of_site;
    SparseState state;  // over logical ids
    PauliFrame frame;   // over logical ids
    std::vector<MeasurementRecord> records;
    double probability = 1.0;
};

// graph cluster state prod_edges CZ |+>^n over the given qudit ids
inline SparseState reference_cluster(int d, const std::vector<int>& qudits,
                                     const std::vector<std::pair<int, int>>& edges) {
    BondGraph trivial;
    for (int q : qudits) trivial.site_partons[q] = {q};
    SparseState s = bond_state(d, trivial);  // all-plus product
    for (const auto& [a, b] : edges) s = op_cz(d, a, b).apply(s);
    return s;
}

// Converts a valence-bond state into a d-level cluster state on the bond
// graph: one Fourier gate per bond (lowest parton id), then the logical
// projection on every site, byproducts converted to logical Z frames.
inline std::vector<LogicalRegister> bonds_to_cluster(const SparseState& input,
                                                     const PauliFrame& input_frame,
                                                     const BondGraph& g, const Policy& policy) {
    const int d = input.d();

    int max_parton = 0;
    for (const auto& [s, ps] : g.site_partons)
        for (int p : ps) max_parton = std::max(max_parton, p);
    int max_site = 0;
    for (const auto& [s, ps] : g.site_partons) max_site = std::max(max_site, s);
    const int logical_base = max_parton + 1;
    auto logical_id = [&](int site) { return logical_base + site; };

    // Fourier on one end of each bond; fold the gate into the tracked frame
    SparseState state = input;
    PauliFrame pframe = input_frame;
    for (const auto& [a, b] : g.bonds) {
        const int target = std::min(a, b);
        state = op_fourier(d, target).apply(state);
        pframe.fourier_update(target);
    }

    struct Work {
        SparseState state;
        std::vector<MeasurementRecord> records;
        std::map<int, int> outcome_of;  // parton -> measured exponent m
        double probability;
    };
    std::mt19937_64 rng(policy.seed);
    std::vector<Work> pending{{std::move(state), {}, {}, 1.0}};

    std::vector<int> sites;
    for (const auto& [s, ps] : g.site_partons) sites.push_back(s);
    std::sort(sites.begin(), sites.end());

    if (policy.mode == Policy::Mode::forced && policy.forced.size() != sites.size())
        throw plan_error("forced policy needs one outcome per site");

    for (size_t si = 0; si < sites.size(); ++si) {
        const int site = sites[si];
        std::vector<int> targets = g.site_partons.at(site);
        std::sort(targets.begin(), targets.end());
        const auto basis = basis_logical_projection(d, static_cast<int>(targets.size()));
        std::vector<Work> next;
        for (auto& w : pending) {
            auto branches = measure_all(w.state, targets, basis, {logical_id(site)});
            if (policy.mode == Policy::Mode::sampled) {
                double total = 0;
                for (const auto& b : branches) total += b.probability;
                std::uniform_real_distribution<double> dist(0.0, total);
                double r = dist(rng);
                size_t pick = branches.size() - 1;
                for (size_t i = 0; i < branches.size(); ++i) {
                    r -= branches[i].probability;
                    if (r <= 0) {
                        pick = i;
                        break;
                    }
                }
                branches = {std::move(branches[pick])};
            } else if (policy.mode == Policy::Mode::forced) {
                bool found = false;
                for (auto& b : branches)
                    if (b.record.outcome == policy.forced[si]) {
                        branches = {std::move(b)};
                        found = true;
                        break;
                    }
                if (!found) throw outcome_error("forced outcome has zero probability");
            }
            for (auto& b : branches) {
                Work nw{std::move(b.state), w.records, w.outcome_of,
                        w.probability * b.probability};
                nw.records.push_back(b.record);
                for (size_t i = 0; i + 1 < targets.size(); ++i)
                    nw.outcome_of[targets[i]] = b.record.outcome[i];
                nw.outcome_of[targets.back()] = 0;
                next.push_back(std::move(nw));
            }
        }
        pending = std::move(next);
    }

    std::vector<LogicalRegister> out;
    for (auto& w : pending) {
        LogicalRegister reg{{}, std::move(w.state), PauliFrame(d), std::move(w.records),
                            w.probability};
        for (int s : sites) reg.logical_of_site[s] = logical_id(s);
        // z_L(s) = sum_{p in s} z_p - sum_{p bonded into s} (m_p + x_p)
        for (int s : sites)
            for (int p : g.site_partons.at(s)) {
                const auto [xp, zp] = pframe.at(p);
                reg.frame.add_z(logical_id(s), zp);
                const int partner = g.partner(p);
                if (partner >= 0)
                    reg.frame.add_z(logical_id(g.site_of(partner)),
                                    -(w.outcome_of.at(p) + xp));
            }
        out.push_back(std::move(reg));
    }
    return out;
}

struct ClusterReport {
    bool pass = true;
    std::vector<int> violated_sites;  // d = 2: stabilizers with eigenvalue != +1
    double overlap = 0.0;             // |<reference|corrected>|
};

inline ClusterReport verify_cluster(const LogicalRegister& reg, const BondGraph& g,
                                    double tol = 1e-10) {
    const int d = reg.state.d();
    ClusterReport rep;
    SparseState corrected = reg.frame.correct(reg.state);

    std::vector<int> qudits;
    std::map<int, int> site_of_logical;
    for (const auto& [site, lq] : reg.logical_of_site) {
        qudits.push_back(lq);
        site_of_logical[lq] = site;
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& [sa, sb] : g.logical_edges())
        edges.push_back({reg.logical_of_site.at(sa), reg.logical_of_site.at(sb)});

    auto ref = reference_cluster(d, qudits, edges);
    rep.overlap = std::abs(corrected.overlap(ref));
    if (d == 2) {
        for (int q : qudits) {
            SparseState k = op_x(2, q).apply(corrected);
            for (const auto& [a, b] : edges) {
                if (a == q) k = op_z(2, b).apply(k);
                if (b == q) k = op_z(2, a).apply(k);
            }
            const cplx ev = corrected.overlap(k);
            if (std::abs(ev - 1.0) > tol) {
                rep.pass = false;
                rep.violated_sites.push_back(site_of_logical.at(q));
            }
        }
    } else {
        rep.pass = rep.overlap > 1.0 - tol;
    }
    return rep;
}

// ---- gate teleportation ----

struct TeleportBranch {
    SparseState state;
    PauliFrame frame;
    MeasurementRecord record;
    double probability = 1.0;
};

// One-qudit gate: joint twisted-Bell measurement on (input, bond end);
// output carries frame X^{-r} Z^{-s}.
inline std::vector<TeleportBranch> teleport_single(const std::vector<cplx>& u, int d,
                                                   const SparseState& input, int input_parton,
                                                   int bond_a, int bond_b, const Policy& policy) {
    BondGraph bg;
    bg.site_partons[0] = {bond_a};
    bg.site_partons[1] = {bond_b};
    bg.bonds = {{bond_a, bond_b}};
    SparseState full = input.tensor(bond_state(d, bg));
    auto basis = basis_twisted_n(d, u);
    auto branches = measure_all(full, {input_parton, bond_a}, basis);

    std::vector<TeleportBranch> out;
    for (auto& b : branches) {
        TeleportBranch tb{std::move(b.state), PauliFrame(d), b.record, b.probability};
        tb.frame.add_x(bond_b, -b.record.outcome[0]);
        tb.frame.add_z(bond_b, -b.record.outcome[1]);
        out.push_back(std::move(tb));
    }
    if (policy.mode == Policy::Mode::forced) {
        for (auto& b : out)
            if (b.record.outcome == policy.forced.at(0)) return {std::move(b)};
        throw outcome_error("forced outcome has zero probability");
    }
    if (policy.mode == Policy::Mode::sampled) {
        std::mt19937_64 rng(policy.seed);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        double r = dist(rng);
        for (auto& b : out) {
            r -= b.probability;
            if (r <= 0) return {std::move(b)};
        }
        return {std::move(out.back())};
    }
    return out;
}

// Controlled-phase gate through twisted GHZ bases |O> on (1,2,3) and |W> on
// (5,6,7); inputs on partons (q1, q5), outputs on (q4, q8) with frames
//   q4: X^{t-r} Z^{-(s+u)},   q8: X^{w-u} Z^{-(r+v)}.
struct CzLayout {
    int q1, q2, q3, q4, q5, q6, q7, q8;
};

inline std::vector<TeleportBranch> teleport_cz(const SparseState& input, const CzLayout& lay,
                                               const Policy& policy) {
    const int d = input.d();
    BondGraph bg;
    bg.site_partons[0] = {lay.q2, lay.q3};
    bg.site_partons[1] = {lay.q6, lay.q7};
    bg.site_partons[2] = {lay.q4};
    bg.site_partons[3] = {lay.q8};
    bg.bonds = {{lay.q2, lay.q6}, {lay.q3, lay.q4}, {lay.q7, lay.q8}};
    SparseState full = input.tensor(bond_state(d, bg));

    auto obasis = basis_twisted_o(d);
    auto wbasis = basis_twisted_w(d);

    std::vector<TeleportBranch> out;
    for (auto& ob : measure_all(full, {lay.q1, lay.q2, lay.q3}, obasis)) {
        for (auto& wb : measure_all(ob.state, {lay.q5, lay.q6, lay.q7}, wbasis)) {
            TeleportBranch tb{std::move(wb.state), PauliFrame(d), {}, ob.probability * wb.probability};
            const int r = ob.record.outcome[0], s = ob.record.outcome[1], t = ob.record.outcome[2];
            const int u = wb.record.outcome[0], v = wb.record.outcome[1], w = wb.record.outcome[2];
            tb.record.targets = {lay.q1, lay.q2, lay.q3, lay.q5, lay.q6, lay.q7};
            tb.record.basis = "twisted_O+twisted_W";
            tb.record.outcome = {r, s, t, u, v, w};
            tb.frame.add_x(lay.q4, t - r);
            tb.frame.add_z(lay.q4, -(s + u));
            tb.frame.add_x(lay.q8, w - u);
            tb.frame.add_z(lay.q8, -(r + v));
            out.push_back(std::move(tb));
        }
    }
    if (policy.mode == Policy::Mode::forced) {
        for (auto& b : out)
            if (b.record.outcome == policy.forced.at(0)) return {std::move(b)};
        throw outcome_error("forced outcome has zero probability");
    }
    if (policy.mode == Policy::Mode::sampled) {
        std::mt19937_64 rng(policy.seed);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        double r = dist(rng);
        for (auto& b : out) {
            r -= b.probability;
            if (r <= 0) return {std::move(b)};
        }
        return {std::move(out.back())};
    }
    return out;
}

// ---- circuits ----

struct CircuitGate {
    enum class Kind { single, cz };
    Kind kind = Kind::single;
    std::vector<cplx> matrix;  // single: d x d unitary
    std::string name;
    int wire_a = 0, wire_b = 1;
};

struct CircuitResult {
    SparseState state;  // over wire partons, frame corrected
    PauliFrame frame;   // residual (empty after correction)
    std::vector<MeasurementRecord> transcript;
    std::vector<int> wires;  // final parton id per logical wire
    int bonds_used = 0;
};

// Adaptive MBQC execution: every single-qudit gate teleports through one
// fresh bond with the accumulated frame folded into the measurement basis;
// CZ gates run the eight-parton gadget with frames pushed through
// classically. `bond_budget` models the finite reduced resource.
inline CircuitResult run_circuit(const std::vector<CircuitGate>& gates, int n_wires, int d,
                                 int bond_budget, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    int next_id = 0;
    std::vector<int> wire(static_cast<size_t>(n_wires));
    std::vector<int> init;
    for (int w = 0; w < n_wires; ++w) {
        wire[static_cast<size_t>(w)] = next_id++;
        init.push_back(wire[static_cast<size_t>(w)]);
    }
    SparseState state = SparseState::basis_state(d, init, std::vector<int>(init.size(), 0));
    PauliFrame frame(d);
    CircuitResult res{state, frame, {}, {}, 0};
    int bonds = 0;

    auto matmul = [d](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        const size_t n = static_cast<size_t>(d);
        std::vector<cplx> c(n * n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k)
                for (size_t j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
        return c;
    };
    auto x_mat = [d](int power) {
        const size_t n = static_cast<size_t>(d);
        std::vector<cplx> m(n * n, 0.0);
        for (int j = 0; j < d; ++j) m[static_cast<size_t>(((j + power) % d + d) % d) * n + static_cast<size_t>(j)] = 1.0;
        return m;
    };
    auto z_mat = [d](int power) {
        const size_t n = static_cast<size_t>(d);
        std::vector<cplx> m(n * n, 0.0);
        for (int j = 0; j < d; ++j) m[static_cast<size_t>(j) * n + static_cast<size_t>(j)] =
            omega_root(d, static_cast<long long>(j) * power);
        return m;
    };

    for (const auto& gate : gates) {
        if (gate.kind == CircuitGate::Kind::single) {
            if (bonds + 1 > bond_budget)
                throw resource_error("circuit needs more bonds than the resource provides");
            bonds += 1;
            const int w = gate.wire_a;
            const int in = wire[static_cast<size_t>(w)];
            const auto [fx, fz] = res.frame.at(in);
            res.frame.ops.erase(in);
            // adapt the basis: V = U Z^-z X^-x undoes the pending frame
            auto v = matmul(gate.matrix, matmul(z_mat(-fz), x_mat(-fx)));
            const int ba = next_id++, bb = next_id++;
            auto branch = std::move(
                teleport_single(v, d, res.state, in, ba, bb, Policy::sampled(rng()))[0]);
            res.state = std::move(branch.state);
            res.frame = frame_compose(res.frame, branch.frame);
            res.transcript.push_back(branch.record);
            wire[static_cast<size_t>(w)] = bb;
        } else {
            if (bonds + 3 > bond_budget)
                throw resource_error("circuit needs more bonds than the resource provides");
            bonds += 3;
            const int wa = gate.wire_a, wb = gate.wire_b;
            const int qa = wire[static_cast<size_t>(wa)], qb = wire[static_cast<size_t>(wb)];
            // push frames through CZ classically: z_a += x_b, z_b += x_a
            const auto [xa, za] = res.frame.at(qa);
            const auto [xb, zb] = res.frame.at(qb);
            res.frame.ops.erase(qa);
            res.frame.ops.erase(qb);
            CzLayout lay{qa, next_id, next_id + 1, next_id + 2, qb, next_id + 3, next_id + 4,
                         next_id + 5};
            next_id += 6;
            auto branch = std::move(teleport_cz(res.state, lay, Policy::sampled(rng()))[0]);
            res.state = std::move(branch.state);
            res.frame = frame_compose(res.frame, branch.frame);
            res.frame.add_x(lay.q4, xa);
            res.frame.add_z(lay.q4, za + xb);
            res.frame.add_x(lay.q8, xb);
            res.frame.add_z(lay.q8, zb + xa);
            res.transcript.push_back(branch.record);
            wire[static_cast<size_t>(wa)] = lay.q4;
            wire[static_cast<size_t>(wb)] = lay.q8;
        }
    }
    res.bonds_used = bonds;
    res.wires = wire;
    res.state = res.frame.correct(res.state);
    res.frame = PauliFrame(d);
    return res;
}

// dense reference: the circuit applied directly to |0...0>
inline SparseState circuit_reference(const std::vector<CircuitGate>& gates,
                                     const std::vector<int>& wires, int d) {
    SparseState s = SparseState::basis_state(d, wires, std::vector<int>(wires.size(), 0));
    for (const auto& g : gates) {
        if (g.kind == CircuitGate::Kind::single)
            s = LocalOperator::dense({wires[static_cast<size_t>(g.wire_a)]}, d, g.matrix).apply(s);
        else
            s = op_cz(d, wires[static_cast<size_t>(g.wire_a)], wires[static_cast<size_t>(g.wire_b)])
                    .apply(s);
    }
    return s;
}

}  // namespace plaq
