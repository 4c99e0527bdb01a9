#pragma once

// Command-line entry points: verification commands, pipeline runs, plan and
// report serialization. Reports are emitted as human text on stdout and,
// with --report, as deterministic JSON.
//
// Exit codes: 0 all checks pass, 1 check failure, 2 usage/parse error,
// 3 capacity exceeded.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plaquette/cocycle.hpp"
#include "plaquette/czx.hpp"
#include "plaquette/lattice_io.hpp"
#include "plaquette/mbqc.hpp"
#include "plaquette/routing.hpp"
#include "plaquette/symmetry.hpp"

namespace plaq::cli {

struct RunConfig {
    std::string command;
    std::string lattice = "builtin:square:2x2";
    std::string group = "Z2";
    int c = 1;
    int gbar = 1;
    int d = 0;  // 0: use group order
    std::uint64_t seed = 0;
    std::string policy = "exhaustive";
    std::string report_path;
    std::size_t max_amps = 1u << 20;
    // command-specific
    int length = 4;
    std::string variant = "czx";
    std::string pattern = "checkerboard";
    std::string gate = "H";
    std::string circuit_path;
    std::string out_path;
    int spacing = 4;
    double dilute = 0.0;
    int trials = 20;
};

namespace detail {

struct LatticeBundle {
    Lattice lattice;
    BranchingAssignment branching;
    std::string builtin_name;  // empty for file lattices
    int nx = 0, ny = 0;
};

inline LatticeBundle resolve_lattice(const std::string& ref) {
    if (ref.rfind("builtin:", 0) == 0) {
        std::string rest = ref.substr(8);
        std::string name = rest;
        int nx = 2, ny = 2;
        auto colon = rest.find(':');
        if (colon != std::string::npos) {
            name = rest.substr(0, colon);
            std::string dims = rest.substr(colon + 1);
            auto x = dims.find('x');
            if (x == std::string::npos)
                throw std::invalid_argument("builtin dims must look like 3x3");
            nx = std::stoi(dims.substr(0, x));
            ny = std::stoi(dims.substr(x + 1));
        }
        auto [l, br] = builtin(name, nx, ny);
        return {std::move(l), std::move(br), name, nx, ny};
    }
    auto loaded = load_lattice(ref);
    BranchingAssignment br;
    if (loaded.branching)
        br = *loaded.branching;
    else
        br = derive_branching(loaded.lattice);
    return {std::move(loaded.lattice), std::move(br), "", 0, 0};
}

inline Policy resolve_policy(const std::string& text, std::uint64_t default_seed) {
    if (text == "exhaustive") return Policy::exhaustive();
    if (text.rfind("seed:", 0) == 0) return Policy::sampled(std::stoull(text.substr(5)));
    if (text == "sampled") return Policy::sampled(default_seed);
    throw std::invalid_argument("policy must be 'exhaustive', 'sampled' or 'seed:N'");
}

inline void emit(const RunConfig& cfg, const nlohmann::json& report) {
    if (cfg.report_path.empty()) return;
    std::ofstream out(cfg.report_path);
    if (!out) throw std::runtime_error("cannot write report to " + cfg.report_path);
    out << report.dump(2) << "\n";
}

inline nlohmann::json phase_json(const PhaseExponent& p) {
    return {{"num", p.num()}, {"order", p.order()}};
}

inline std::vector<cplx> named_gate(const std::string& name, int d) {
    if (name == "H" || name == "F") {
        std::vector<cplx> m(static_cast<size_t>(d) * static_cast<size_t>(d));
        const double s = 1.0 / std::sqrt(static_cast<double>(d));
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j)
                m[static_cast<size_t>(k * d + j)] = s * omega_root(d, static_cast<long long>(k) * j);
        return m;
    }
    if (name == "X") {
        std::vector<cplx> m(static_cast<size_t>(d) * static_cast<size_t>(d), 0.0);
        for (int j = 0; j < d; ++j) m[static_cast<size_t>(((j + 1) % d) * d + j)] = 1.0;
        return m;
    }
    if (name == "Z") {
        std::vector<cplx> m(static_cast<size_t>(d) * static_cast<size_t>(d), 0.0);
        for (int j = 0; j < d; ++j) m[static_cast<size_t>(j * d + j)] = omega_root(d, j);
        return m;
    }
    throw std::invalid_argument("unknown gate '" + name + "' (use H, F, X, Z, CZ or a file)");
}

inline std::vector<cplx> matrix_from_json(const nlohmann::json& j, int d) {
    std::vector<cplx> m;
    for (const auto& row : j)
        for (const auto& cell : row) {
            if (cell.is_array())
                m.emplace_back(cell.at(0).get<double>(), cell.at(1).get<double>());
            else
                m.emplace_back(cell.get<double>(), 0.0);
        }
    if (m.size() != static_cast<size_t>(d) * static_cast<size_t>(d))
        throw std::invalid_argument("matrix must be d x d");
    return m;
}

inline nlohmann::json plan_json(const RoutingPlan& plan) {
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& ln : plan.lines) {
        nlohmann::json merges = nlohmann::json::array();
        for (const auto& [p, q] : ln.merges) merges.push_back({p, q});
        lines.push_back({{"faces", ln.faces},
                         {"endpoints", {ln.endpoint_a, ln.endpoint_b}},
                         {"merges", merges},
                         {"kind", ln.kind()}});
    }
    return {{"lines", lines}};
}

inline RoutingPlan plan_from_json(const nlohmann::json& j) {
    RoutingPlan plan;
    for (const auto& jl : j.at("lines")) {
        DashedLine ln;
        ln.faces = jl.at("faces").get<std::vector<int>>();
        ln.endpoint_a = jl.at("endpoints").at(0).get<int>();
        ln.endpoint_b = jl.at("endpoints").at(1).get<int>();
        for (const auto& m : jl.at("merges")) ln.merges.push_back({m.at(0), m.at(1)});
        plan.lines.push_back(std::move(ln));
    }
    return plan;
}

}  // namespace detail

inline int cmd_verify_cocycle(const RunConfig& cfg, std::ostream& os) {
    GroupSpec G = GroupSpec::parse(cfg.group);
    auto w = standard_cocycle(G, cfg.c);
    auto rep = check_cocycle_condition(w);
    auto inv = class_invariant(w, G.element_at(1));
    nlohmann::json j = {{"command", "verify cocycle"},
                        {"group", cfg.group},
                        {"c", cfg.c},
                        {"cocycle_condition", rep.pass},
                        {"class_invariant", detail::phase_json(inv)},
                        {"pass", rep.pass}};
    os << "cocycle condition over " << G.order() * G.order() * G.order() * G.order()
       << " tuples: " << (rep.pass ? "pass" : "FAIL") << "\n";
    os << "class invariant: exp(2*pi*i * " << inv.str() << ")\n";
    detail::emit(cfg, j);
    return rep.pass ? 0 : 1;
}

inline int cmd_verify_symmetry(const RunConfig& cfg, std::ostream& os) {
    auto bundle = detail::resolve_lattice(cfg.lattice);
    GroupSpec G = GroupSpec::parse(cfg.group);
    auto nu = cocycle_to_cochain(standard_cocycle(G, cfg.c));
    const GroupElement gbar = G.element_at(cfg.gbar % G.order());

    bool linear = true;
    std::set<std::string> done;
    for (const auto& s : bundle.lattice.sites()) {
        const auto& label = bundle.branching.sublattice.at(s.id);
        if (!done.insert(label).second) continue;
        if (!verify_linear_rep(nu, bundle.branching, bundle.lattice, s.id, gbar).pass)
            linear = false;
    }
    auto grep = verify_global_symmetry(nu, bundle.branching, bundle.lattice, gbar);

    nlohmann::json f3 = nlohmann::json::array();
    for (const auto& p : grep.f3) f3.push_back(detail::phase_json(p));
    const bool pass = linear && grep.pass;
    nlohmann::json j = {{"command", "verify symmetry"}, {"lattice", cfg.lattice},
                        {"group", cfg.group},           {"c", cfg.c},
                        {"gbar", cfg.gbar},             {"linear_representation", linear},
                        {"global_symmetry", grep.pass}, {"f3_exponents", f3},
                        {"pass", pass}};
    os << "linear representation: " << (linear ? "pass" : "FAIL") << "\n";
    os << "global symmetry: " << (grep.pass ? "pass (F3 = 1 for every g)" : "FAIL") << "\n";
    if (!grep.pass) os << "  " << grep.detail << "\n";
    detail::emit(cfg, j);
    return pass ? 0 : 1;
}

inline int cmd_verify_boundary(const RunConfig& cfg, std::ostream& os) {
    GroupSpec G = GroupSpec::parse(cfg.group);
    auto nu = cocycle_to_cochain(standard_cocycle(G, cfg.c));
    auto nu0 = cocycle_to_cochain(standard_cocycle(G, 0));
    const GroupElement gbar = G.element_at(cfg.gbar % G.order());
    auto bd = uniform_boundary(cfg.length);
    const int d = G.order();

    bool equal = true;
    bool distinguishes = false;
    for (int gi = 0; gi < d && equal; ++gi) {
        auto m = boundary_mpuo(nu, bd, G.element_at(gi), gbar);
        std::vector<int> alpha(static_cast<size_t>(cfg.length), 0);
        while (true) {
            auto direct = boundary_action(nu, bd, G.element_at(gi), gbar, alpha);
            if (contract(m, alpha) != direct) {
                equal = false;
                break;
            }
            if (direct != boundary_action(nu0, bd, G.element_at(gi), gbar, alpha))
                distinguishes = true;
            size_t i = 0;
            for (; i < alpha.size(); ++i) {
                if (++alpha[i] < d) break;
                alpha[i] = 0;
            }
            if (i == alpha.size()) break;
        }
    }
    const bool pass = equal && (cfg.c == 0 || distinguishes);
    nlohmann::json j = {{"command", "verify boundary"},
                        {"group", cfg.group},
                        {"c", cfg.c},
                        {"length", cfg.length},
                        {"mpuo_equals_action", equal},
                        {"distinguishes_trivial_class", distinguishes},
                        {"pass", pass}};
    os << "MPUO contraction == boundary action on all " << cfg.length << "-site assignments: "
       << (equal ? "pass" : "FAIL") << "\n";
    if (cfg.c != 0)
        os << "boundary phases differ from the c=0 class: " << (distinguishes ? "yes" : "NO")
           << "\n";
    detail::emit(cfg, j);
    return pass ? 0 : 1;
}

inline int cmd_verify_czx(const RunConfig& cfg, std::ostream& os) {
    auto bundle = detail::resolve_lattice(cfg.lattice);
    const auto variant = czx_variant_from(cfg.variant);
    nlohmann::json j = {{"command", "verify czx"},
                        {"lattice", cfg.lattice},
                        {"variant", cfg.variant}};
    try {
        auto set = czx_operators(bundle.lattice, bundle.branching, variant);
        j["squares_to_identity"] = true;
    } catch (const representation_error& e) {
        os << "representation error: " << e.what() << "\n";
        j["squares_to_identity"] = false;
        j["pass"] = false;
        detail::emit(cfg, j);
        return 1;
    }
    auto set = czx_operators(bundle.lattice, bundle.branching, variant);

    auto psi = plaquette_state(bundle.lattice, 2, cfg.max_amps);
    auto terms = czx_hamiltonian(bundle.lattice);
    bool gs_ok = true;
    for (const auto& t : terms) {
        auto hpsi = apply_czx_term(t, psi);
        if (std::abs(psi.overlap(hpsi) + 1.0) > 1e-12) gs_ok = false;
    }
    bool commute_ok = true;
    std::vector<int> partons;
    for (const auto& p : bundle.lattice.partons()) partons.push_back(p.id);
    // full random states up to 16 partons, plaquette-sector states beyond
    const bool full_random = partons.size() <= 16;
    j["commutator_states"] = full_random ? "random" : "random_sector";
    for (int trial = 0; trial < std::min(cfg.trials, 20) && commute_ok; ++trial) {
        auto phi = full_random
                       ? random_state(2, partons, cfg.seed + static_cast<std::uint64_t>(trial))
                       : random_sector_state(bundle.lattice, 2,
                                             cfg.seed + static_cast<std::uint64_t>(trial));
        for (const auto& t : terms) {
            auto a = phi;
            for (const auto& [site, op] : set.site_ops) a = op.apply(a);
            a = apply_czx_term(t, a);
            auto b = apply_czx_term(t, phi);
            for (const auto& [site, op] : set.site_ops) b = op.apply(b);
            const double diff = std::abs(a.overlap(a) + b.overlap(b) - a.overlap(b) - b.overlap(a));
            if (diff > 1e-12) commute_ok = false;
        }
    }
    const bool pass = gs_ok && commute_ok;
    j["ground_state_eigenvalue"] = gs_ok ? -static_cast<double>(terms.size()) : 0.0;
    j["hamiltonian_symmetric"] = commute_ok;
    j["pass"] = pass;
    os << "H|psi_gs> = -" << terms.size() << "|psi_gs>: " << (gs_ok ? "pass" : "FAIL") << "\n";
    os << "[H_pj, global " << cfg.variant << "] = 0 on random states: "
       << (commute_ok ? "pass" : "FAIL") << "\n";
    detail::emit(cfg, j);
    return pass ? 0 : 1;
}

inline int cmd_reduce(const RunConfig& cfg, std::ostream& os) {
    auto bundle = detail::resolve_lattice(cfg.lattice);
    const int d = cfg.d ? cfg.d : GroupSpec::parse(cfg.group).order();
    RoutingPlan plan;
    if (cfg.pattern == "checkerboard" || cfg.pattern == "builtin") {
        if (bundle.builtin_name.empty())
            throw std::invalid_argument("builtin pattern needs a builtin: lattice reference");
        plan = builtin_plan(bundle.lattice, bundle.builtin_name, bundle.nx, bundle.ny);
    } else {
        std::ifstream in(cfg.pattern);
        if (!in) throw std::invalid_argument("cannot open plan file " + cfg.pattern);
        nlohmann::json j;
        in >> j;
        plan = detail::plan_from_json(j);
        auto rep = check_plan(plan, bundle.lattice);
        if (!rep.pass) throw std::invalid_argument("plan invalid:\n" + rep.str());
    }

    auto policy = detail::resolve_policy(cfg.policy, cfg.seed);
    auto executions = execute_plan(bundle.lattice, d, plan, policy);
    bool pass = true;
    int branches = 0;
    for (const auto& le : executions) {
        for (const auto& b : le.branches) {
            ++branches;
            auto corrected = b.frame.correct(b.state);
            SparseState ideal(d, {le.bond.first, le.bond.second});
            for (int jj = 0; jj < d; ++jj)
                ideal.amps()[std::string(2, static_cast<char>(jj))] =
                    1.0 / std::sqrt(static_cast<double>(d));
            if (std::abs(std::abs(corrected.overlap(ideal)) - 1.0) > 1e-10) pass = false;
        }
    }
    nlohmann::json j = {{"command", "reduce"},
                        {"lattice", cfg.lattice},
                        {"d", d},
                        {"bonds", executions.size()},
                        {"branches_checked", branches},
                        {"pass", pass}};
    os << executions.size() << " bonds, " << branches
       << " outcome branches; Bell fidelity after frame correction: "
       << (pass ? "pass" : "FAIL") << "\n";
    detail::emit(cfg, j);
    return pass ? 0 : 1;
}

inline int cmd_teleport(const RunConfig& cfg, std::ostream& os) {
    const int d = cfg.d ? cfg.d : 2;
    bool pass = true;
    nlohmann::json j = {{"command", "teleport"}, {"gate", cfg.gate}, {"d", d}};
    if (cfg.gate == "CZ") {
        SparseState chi(d, {0, 1});
        auto r = random_state(d, {0, 1}, cfg.seed + 1);
        chi = r;
        CzLayout lay{0, 2, 3, 4, 1, 5, 6, 7};
        auto ref = op_cz(d, 4, 7).apply([&] {
            SparseState s(d, {4, 7});
            for (const auto& [k, a] : chi.amps()) s.amps()[k] = a;
            return s;
        }());
        auto branches = teleport_cz(chi, lay, detail::resolve_policy(cfg.policy, cfg.seed));
        for (const auto& b : branches) {
            auto corrected = b.frame.correct(b.state);
            if (std::abs(std::abs(corrected.overlap(ref)) - 1.0) > 1e-10) pass = false;
        }
        j["branches"] = branches.size();
        os << "CZ teleportation over " << branches.size() << " outcome branches: "
           << (pass ? "pass" : "FAIL") << "\n";
    } else {
        std::vector<cplx> u;
        if (cfg.gate.size() > 5 && cfg.gate.substr(cfg.gate.size() - 5) == ".json") {
            std::ifstream in(cfg.gate);
            if (!in) throw std::invalid_argument("cannot open " + cfg.gate);
            nlohmann::json jm;
            in >> jm;
            u = detail::matrix_from_json(jm, d);
        } else {
            u = detail::named_gate(cfg.gate, d);
        }
        auto eta = random_state(d, {0}, cfg.seed + 1);
        auto ref = LocalOperator::dense({0}, d, u).apply(eta);
        auto branches =
            teleport_single(u, d, eta, 0, 1, 2, detail::resolve_policy(cfg.policy, cfg.seed));
        for (const auto& b : branches) {
            auto corrected = b.frame.correct(b.state);
            SparseState expect(d, {2});
            for (const auto& [k, a] : ref.amps()) expect.amps()[k] = a;
            if (std::abs(std::abs(corrected.overlap(expect)) - 1.0) > 1e-10) pass = false;
        }
        j["branches"] = branches.size();
        os << "single-qudit teleportation over " << branches.size()
           << " outcome branches: " << (pass ? "pass" : "FAIL") << "\n";
    }
    j["pass"] = pass;
    detail::emit(cfg, j);
    return pass ? 0 : 1;
}

inline int cmd_run(const RunConfig& cfg, std::ostream& os) {
    std::ifstream in(cfg.circuit_path);
    if (!in) throw std::invalid_argument("cannot open circuit file " + cfg.circuit_path);
    nlohmann::json jc;
    in >> jc;
    const int d = cfg.d ? cfg.d : 2;

    int n_wires = 1;
    std::vector<CircuitGate> gates;
    for (const auto& jg : jc) {
        CircuitGate g;
        const auto& targets = jg.at("targets");
        if (targets.size() == 2) {
            if (!jg.at("gate").is_string() || jg.at("gate").get<std::string>() != "CZ")
                throw std::invalid_argument("two-target gates must be CZ");
            g.kind = CircuitGate::Kind::cz;
            g.wire_a = targets.at(0).get<int>();
            g.wire_b = targets.at(1).get<int>();
            g.name = "CZ";
        } else {
            g.kind = CircuitGate::Kind::single;
            g.wire_a = targets.at(0).get<int>();
            if (jg.at("gate").is_string()) {
                g.name = jg.at("gate").get<std::string>();
                g.matrix = detail::named_gate(g.name, d);
            } else {
                g.name = "custom";
                g.matrix = detail::matrix_from_json(jg.at("gate"), d);
            }
        }
        n_wires = std::max({n_wires, g.wire_a + 1, g.wire_b + 1});
        gates.push_back(std::move(g));
    }

    // the reduced lattice provides the bond budget
    auto bundle = detail::resolve_lattice(cfg.lattice);
    int budget;
    if (!bundle.builtin_name.empty()) {
        auto plan = builtin_plan(bundle.lattice, bundle.builtin_name, bundle.nx, bundle.ny);
        budget = static_cast<int>(plan.lines.size());
    } else {
        budget = static_cast<int>(bundle.lattice.faces().size());
    }

    auto res = run_circuit(gates, n_wires, d, budget, cfg.seed);
    auto ref = circuit_reference(gates, res.wires, d);
    const double fidelity = std::abs(res.state.overlap(ref));
    const bool pass = std::abs(fidelity - 1.0) < 1e-9;

    nlohmann::json transcript = nlohmann::json::array();
    for (const auto& r : res.transcript)
        transcript.push_back({{"targets", r.targets}, {"basis", r.basis}, {"outcome", r.outcome}});
    nlohmann::json j = {{"command", "run"},       {"circuit", cfg.circuit_path},
                        {"d", d},                 {"wires", n_wires},
                        {"bonds_used", res.bonds_used}, {"bond_budget", budget},
                        {"fidelity", fidelity},   {"transcript", transcript},
                        {"pass", pass}};
    os << "circuit of " << gates.size() << " gates on " << n_wires << " wires: fidelity "
       << fidelity << " using " << res.bonds_used << "/" << budget << " bonds: "
       << (pass ? "pass" : "FAIL") << "\n";
    detail::emit(cfg, j);
    return pass ? 0 : 1;
}

inline int cmd_route(const RunConfig& cfg, std::ostream& os) {
    auto bundle = detail::resolve_lattice(cfg.lattice);
    if (bundle.builtin_name != "square")
        throw std::invalid_argument("the honeycomb-minor router works on square lattices");
    std::set<int> holes;
    if (cfg.dilute > 0) holes = random_dilution(bundle.lattice, cfg.dilute, cfg.seed);
    RoutingPlan plan;
    try {
        plan = route_honeycomb_minor(bundle.lattice, bundle.nx, bundle.ny, holes, cfg.spacing);
    } catch (const routing_error& e) {
        os << "routing failed: " << e.what() << "\n";
        nlohmann::json j = {{"command", "route"}, {"pass", false}, {"error", e.what()}};
        detail::emit(cfg, j);
        return 1;
    }
    auto rep = check_plan(plan, bundle.lattice);
    auto g = graph_from_edges(plan.target_edges(bundle.lattice));
    const bool honey = is_honeycomb_torus(g);
    const bool pass = rep.pass && honey;
    nlohmann::json j = {{"command", "route"},
                        {"lattice", cfg.lattice},
                        {"spacing", cfg.spacing},
                        {"dilute", cfg.dilute},
                        {"seed", cfg.seed},
                        {"lines", plan.lines.size()},
                        {"holes", holes.size()},
                        {"target_vertices", g.n},
                        {"target_is_honeycomb", honey},
                        {"pass", pass}};
    os << "routed " << plan.lines.size() << " lines over " << bundle.lattice.faces().size()
       << " faces (" << holes.size() << " holes); honeycomb target with " << g.n
       << " hubs: " << (pass ? "pass" : "FAIL") << "\n";
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        out << detail::plan_json(plan).dump(2) << "\n";
    }
    detail::emit(cfg, j);
    return pass ? 0 : 1;
}

inline int run(std::vector<std::string> args, std::ostream& os = std::cout) {
    CLI::App app{"symmetry-protected plaquette states: verification and MBQC pipeline"};
    app.require_subcommand(1);
    RunConfig cfg;
    if (const char* env = std::getenv("PLAQ_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--group", cfg.group, "finite abelian group, e.g. Z2 or Z2xZ3");
        sub->add_option("--c", cfg.c, "cocycle class label");
        sub->add_option("--gbar", cfg.gbar, "fixed group element index");
        sub->add_option("--d", cfg.d, "qudit dimension (defaults to the group order)");
        sub->add_option("--lattice", cfg.lattice, "lattice file or builtin:NAME[:NXxNY]");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--policy", cfg.policy, "exhaustive | sampled | seed:N");
        sub->add_option("--report", cfg.report_path, "write a JSON report");
        sub->add_option("--max-amps", cfg.max_amps, "sparse amplitude bound");
    };

    auto* verify = app.add_subcommand("verify", "verification commands");
    verify->require_subcommand(1);
    auto* vco = verify->add_subcommand("cocycle", "cocycle condition and class invariant");
    add_common(vco);
    auto* vsy = verify->add_subcommand("symmetry", "linear representation and global symmetry");
    add_common(vsy);
    auto* vbd = verify->add_subcommand("boundary", "boundary action vs MPUO contraction");
    add_common(vbd);
    vbd->add_option("--length", cfg.length, "boundary length");
    auto* vcz = verify->add_subcommand("czx", "CZX operators and Hamiltonian");
    add_common(vcz);
    vcz->add_option("--variant", cfg.variant, "czx | sczx | iczx");
    vcz->add_option("--trials", cfg.trials, "random states for the commutator check");

    auto* red = app.add_subcommand("reduce", "plaquette state to valence bonds");
    add_common(red);
    red->add_option("--pattern", cfg.pattern, "checkerboard | builtin | plan.json");

    auto* tel = app.add_subcommand("teleport", "gate teleportation check");
    add_common(tel);
    tel->add_option("--gate", cfg.gate, "H | F | X | Z | CZ | unitary.json");

    auto* runc = app.add_subcommand("run", "simulate a circuit through the MBQC pipeline");
    add_common(runc);
    runc->add_option("--circuit", cfg.circuit_path, "circuit JSON file")->required();

    auto* rou = app.add_subcommand("route", "honeycomb-minor routing");
    add_common(rou);
    rou->add_option("--spacing", cfg.spacing, "hub spacing");
    rou->add_option("--dilute", cfg.dilute, "site deletion probability");
    rou->add_option("--out", cfg.out_path, "write the plan JSON");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            os << app.help();
            return 0;
        }
        os << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (vco->parsed()) return cmd_verify_cocycle(cfg, os);
        if (vsy->parsed()) return cmd_verify_symmetry(cfg, os);
        if (vbd->parsed()) return cmd_verify_boundary(cfg, os);
        if (vcz->parsed()) return cmd_verify_czx(cfg, os);
        if (red->parsed()) return cmd_reduce(cfg, os);
        if (tel->parsed()) return cmd_teleport(cfg, os);
        if (runc->parsed()) return cmd_run(cfg, os);
        if (rou->parsed()) return cmd_route(cfg, os);
    } catch (const capacity_error& e) {
        os << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        os << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        os << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        os << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace plaq::cli
