#pragma once

// Lattice file format (JSON). An edge record names the two counterclockwise-
// consecutive partons of one endpoint crossing; "oriented": "a->b" declares
// the branched arrow from face(a) to face(b).

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "plaquette/lattice.hpp"

namespace plaq {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadedLattice {
    Lattice lattice;
    std::optional<int> qudit_dim;
    std::optional<BranchingAssignment> branching;
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw parse_error("unknown field '" + it.key() + "' in " + where);
    }
}

}  // namespace detail

inline LoadedLattice parse_lattice_json(const nlohmann::json& j, const std::string& origin) {
    using nlohmann::json;
    if (!j.is_object()) throw parse_error(origin + ": top level must be an object");
    detail::reject_unknown(
        j, {"qudit_dim", "sites", "faces", "edges", "periodic", "sublattices", "branching"},
        origin);
    for (const char* req : {"sites", "faces", "edges", "periodic"})
        if (!j.contains(req)) throw parse_error(origin + ": missing field '" + req + "'");

    std::vector<Site> sites;
    for (const auto& js : j.at("sites")) {
        detail::reject_unknown(js, {"id", "partons"}, origin + ":sites");
        Site s;
        s.id = js.at("id").get<int>();
        s.partons = js.at("partons").get<std::vector<int>>();
        for (int p : s.partons)
            if (p < 0) throw parse_error(origin + ": parton ids must be non-negative");
        sites.push_back(std::move(s));
    }
    std::vector<Face> faces;
    for (const auto& jf : j.at("faces")) {
        detail::reject_unknown(jf, {"id", "cycle"}, origin + ":faces");
        Face f;
        f.id = jf.at("id").get<int>();
        f.cycle = jf.at("cycle").get<std::vector<int>>();
        faces.push_back(std::move(f));
    }

    Lattice lattice(std::move(sites), std::move(faces), j.at("periodic").get<bool>());
    auto rep = lattice.validate();
    if (!rep.pass) throw structural_error(origin + ": validation failed:\n" + rep.str());

    // check edge records against the derived edges; attach declared arrows
    std::vector<bool> seen(lattice.edges().size(), false);
    for (const auto& je : j.at("edges")) {
        detail::reject_unknown(je, {"a", "b", "oriented"}, origin + ":edges");
        const int a = je.at("a").get<int>();
        const int b = je.at("b").get<int>();
        int found = -1;
        const Crossing* cross = nullptr;
        for (const auto& e : lattice.edges()) {
            for (const Crossing* c : {&e.a, &e.b}) {
                if ((c->parton_from == a && c->parton_to == b) ||
                    (c->parton_from == b && c->parton_to == a)) {
                    found = e.id;
                    cross = c;
                }
            }
            if (found >= 0) break;
        }
        if (found < 0)
            throw parse_error(origin + ": edge record (" + std::to_string(a) + "," +
                              std::to_string(b) + ") matches no derived edge");
        if (seen[static_cast<size_t>(found)])
            throw parse_error(origin + ": duplicate edge record for edge " + std::to_string(found));
        seen[static_cast<size_t>(found)] = true;
        if (je.contains("oriented") && !je.at("oriented").is_null()) {
            const std::string o = je.at("oriented").get<std::string>();
            if (o != "a->b" && o != "b->a")
                throw parse_error(origin + ": oriented must be \"a->b\", \"b->a\" or null");
            // arrow between the two faces; stored relative to crossing a
            const int from_parton = (o == "a->b") ? a : b;
            const int from_face = (from_parton == cross->parton_from) ? cross->face_from
                                                                      : cross->face_to;
            lattice.set_declared_orientation(
                found, from_face == lattice.edges()[static_cast<size_t>(found)].a.face_from
                           ? EdgeOrientation::forward
                           : EdgeOrientation::backward);
        }
    }

    LoadedLattice out{std::move(lattice), std::nullopt, std::nullopt};
    if (j.contains("qudit_dim")) out.qudit_dim = j.at("qudit_dim").get<int>();

    if (j.contains("sublattices") != j.contains("branching"))
        throw parse_error(origin + ": sublattices and branching must be given together");
    if (j.contains("sublattices")) {
        BranchingAssignment br;
        for (auto it = j.at("sublattices").begin(); it != j.at("sublattices").end(); ++it)
            br.sublattice[std::stoi(it.key())] = it.value().get<std::string>();
        for (auto it = j.at("branching").begin(); it != j.at("branching").end(); ++it) {
            detail::reject_unknown(it.value(), {"ia", "ib"}, origin + ":branching");
            BranchingSets bs;
            bs.ia = it.value().at("ia").get<std::vector<int>>();
            bs.ib = it.value().at("ib").get<std::vector<int>>();
            br.sets[it.key()] = std::move(bs);
        }
        auto brep = out.lattice.check_branching(br);
        if (!brep.pass) throw structural_error(origin + ": branching invalid:\n" + brep.str());
        out.branching = std::move(br);
    }
    return out;
}

inline LoadedLattice load_lattice(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open lattice file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    try {
        return parse_lattice_json(j, path);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline nlohmann::json lattice_to_json(const Lattice& l, const BranchingAssignment* br = nullptr,
                                      std::optional<int> qudit_dim = std::nullopt) {
    nlohmann::json j;
    if (qudit_dim) j["qudit_dim"] = *qudit_dim;
    j["periodic"] = l.periodic();
    j["sites"] = nlohmann::json::array();
    for (const auto& s : l.sites()) j["sites"].push_back({{"id", s.id}, {"partons", s.partons}});
    j["faces"] = nlohmann::json::array();
    for (const auto& f : l.faces()) j["faces"].push_back({{"id", f.id}, {"cycle", f.cycle}});
    j["edges"] = nlohmann::json::array();
    for (const auto& e : l.edges())
        j["edges"].push_back(
            {{"a", e.a.parton_from}, {"b", e.a.parton_to}, {"oriented", nullptr}});
    if (br) {
        nlohmann::json subs = nlohmann::json::object(), sets = nlohmann::json::object();
        for (const auto& [site, label] : br->sublattice) subs[std::to_string(site)] = label;
        for (const auto& [label, bs] : br->sets) sets[label] = {{"ia", bs.ia}, {"ib", bs.ib}};
        j["sublattices"] = subs;
        j["branching"] = sets;
    }
    return j;
}

inline void save_lattice(const std::string& path, const Lattice& l,
                         const BranchingAssignment* br = nullptr,
                         std::optional<int> qudit_dim = std::nullopt) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write lattice file '" + path + "'");
    out << lattice_to_json(l, br, qudit_dim).dump(2) << "\n";
}

}  // namespace plaq
