#include <catch2/catch_amalgamated.hpp>

#include "plaquette/bases.hpp"
#include "plaquette/builtins.hpp"
#include "plaquette/frame.hpp"
#include "plaquette/state.hpp"

using namespace plaq;
using Catch::Matchers::WithinAbs;

namespace {

// open lattice holding a single face over k single-parton sites
Lattice single_face(int k) {
    std::vector<Site> sites;
    Face f;
    f.id = 0;
    for (int i = 0; i < k; ++i) {
        sites.push_back({i, {i}});
        f.cycle.push_back(i);
    }
    Lattice l(std::move(sites), {f}, false);
    REQUIRE(l.validate().pass);
    return l;
}

SparseState ghz(int d, const std::vector<int>& partons, std::vector<double> signs = {}) {
    SparseState s(d, partons);
    for (int g = 0; g < d; ++g) {
        std::string key(partons.size(), static_cast<char>(g));
        s.amps()[key] = (signs.empty() ? 1.0 : signs[static_cast<size_t>(g)]) /
                        std::sqrt(static_cast<double>(d));
    }
    return s;
}

}  // namespace

TEST_CASE("plaquette state on the 2x2 square torus") {
    auto [l, br] = builtin("square", 2, 2);
    auto psi = plaquette_state(l, 2);
    CHECK(psi.size() == 16);
    for (const auto& [k, a] : psi.amps()) CHECK_THAT(std::abs(a), WithinAbs(0.25, 1e-14));
    CHECK_THAT(psi.norm2(), WithinAbs(1.0, 1e-12));

    // amplitude of the all-zeros assignment is 2^{-n_p/2}
    auto zero = SparseState::basis_state(2, psi.partons(), std::vector<int>(16, 0));
    CHECK_THAT(std::abs(zero.overlap(psi)), WithinAbs(0.25, 1e-12));
}

TEST_CASE("plaquette state on a single face") {
    auto square = plaquette_state(single_face(4), 2);
    CHECK(square.size() == 2);
    CHECK_THAT(std::abs(square.overlap(ghz(2, {0, 1, 2, 3}))), WithinAbs(1.0, 1e-12));

    auto triangle = plaquette_state(single_face(3), 3);
    CHECK(triangle.size() == 3);
    CHECK_THAT(std::abs(triangle.overlap(ghz(3, {0, 1, 2}))), WithinAbs(1.0, 1e-12));
}

TEST_CASE("capacity guard") {
    auto [l, br] = builtin("square", 3, 3);
    CHECK_THROWS_AS(plaquette_state(l, 2, 256), capacity_error);
}

TEST_CASE("gate actions") {
    SparseState s0 = SparseState::basis_state(3, {0}, {0});
    auto s1 = op_x(3, 0).apply(s0);
    CHECK_THAT(std::abs(s1.overlap(SparseState::basis_state(3, {0}, {1}))), WithinAbs(1.0, 1e-12));

    auto sz = op_z(3, 0).apply(s1);
    cplx expect = omega_root(3, 1);
    CHECK_THAT(std::abs(s1.overlap(sz) - expect), WithinAbs(0.0, 1e-12));

    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            auto in = SparseState::basis_state(3, {0, 1}, {j, k});
            auto out = op_cz(3, 0, 1).apply(in);
            CHECK_THAT(std::abs(in.overlap(out) - omega_root(3, j * k)), WithinAbs(0.0, 1e-12));
        }
}

TEST_CASE("unitaries preserve the norm") {
    auto psi = random_state(3, {0, 1, 2}, 42);
    auto out = op_fourier(3, 1).apply(op_cz(3, 0, 2).apply(op_x(3, 0).apply(psi)));
    CHECK_THAT(out.norm2(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("overlap basics") {
    auto psi = random_state(2, {0, 1, 2, 3}, 7);
    CHECK_THAT(std::abs(psi.overlap(psi) - 1.0), WithinAbs(0.0, 1e-12));

    auto plus = ghz(2, {0, 1, 2}, {1.0, 1.0});
    auto minus = ghz(2, {0, 1, 2}, {1.0, -1.0});
    CHECK_THAT(std::abs(plus.overlap(minus)), WithinAbs(0.0, 1e-12));

    SparseState other(2, {0, 1});
    CHECK_THROWS_AS(psi.overlap(other), std::invalid_argument);
}

TEST_CASE("every shipped basis is complete at d = 2 and d = 3") {
    std::mt19937_64 rng(5);
    for (int d : {2, 3}) {
        CHECK(basis_x_tilde(d).completeness_defect() < 1e-12);
        CHECK(basis_computational(d).completeness_defect() < 1e-12);
        CHECK(basis_bell(d).completeness_defect() < 1e-12);
        CHECK(basis_twisted_o(d).completeness_defect() < 1e-12);
        CHECK(basis_twisted_w(d).completeness_defect() < 1e-12);
        for (int k = 2; k <= 4; ++k)
            CHECK(basis_logical_projection(d, k).completeness_defect() < 1e-12);
        for (int trial = 0; trial < 3; ++trial)
            CHECK(basis_twisted_n(d, random_unitary(d, rng)).completeness_defect() < 1e-12);
    }
}

TEST_CASE("X-basis measurement concentrates GHZ entanglement") {
    auto s = ghz(2, {0, 1, 2, 3});
    auto branches = measure_all(s, {0}, basis_x_tilde(2));
    REQUIRE(branches.size() == 2);
    double total = 0;
    for (const auto& b : branches) {
        total += b.probability;
        if (b.record.outcome == std::vector<int>{0})
            CHECK_THAT(std::abs(b.state.overlap(ghz(2, {1, 2, 3}))), WithinAbs(1.0, 1e-12));
        else
            CHECK_THAT(std::abs(b.state.overlap(ghz(2, {1, 2, 3}, {1.0, -1.0}))),
                       WithinAbs(1.0, 1e-12));
    }
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
}

TEST_CASE("Bell merge of two GHZ states") {
    auto s = ghz(2, {1, 2, 3, 4}).tensor(ghz(2, {5, 6, 7, 8}));
    // measure parton 1 of the first face and parton 5 of the second
    auto b = measure_forced(s, {1, 5}, basis_bell(2), {0, 0});
    CHECK_THAT(std::abs(b.state.overlap(ghz(2, {2, 3, 4, 6, 7, 8}))), WithinAbs(1.0, 1e-10));
}

TEST_CASE("forced zero-probability outcome errors out") {
    auto s = SparseState::basis_state(2, {0}, {0});
    CHECK_THROWS_AS(measure_forced(s, {0}, basis_computational(2), {1}), outcome_error);
}

TEST_CASE("exhaustive outcomes conserve probability") {
    auto psi = random_state(3, {0, 1, 2}, 11);
    auto branches = measure_all(psi, {0, 1}, basis_bell(3));
    double total = 0;
    for (const auto& b : branches) total += b.probability;
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
}

TEST_CASE("pauli frame composition") {
    PauliFrame f(2), g(2);
    f.add_x(0, 1);
    g.add_z(0, 1);
    auto h = frame_compose(f, g);
    CHECK(h.at(0) == std::pair<int, int>{1, 1});

    PauliFrame z2(2);
    z2.add_z(3, 1);
    auto zz = frame_compose(z2, z2);
    CHECK(zz.empty());

    PauliFrame x3(3);
    x3.add_x(0, 2);
    auto x6 = frame_compose(x3, x3);
    CHECK(x6.at(0) == std::pair<int, int>{1, 0});
}

TEST_CASE("frame application matches operator products") {
    PauliFrame f(3);
    f.add_x(1, 2);
    f.add_z(1, 1);
    auto psi = random_state(3, {0, 1}, 23);
    auto framed = f.apply_to(psi);
    auto expect = op_x(3, 1, 2).apply(op_z(3, 1, 1).apply(psi));
    CHECK_THAT(std::abs(framed.overlap(expect)), WithinAbs(1.0, 1e-12));
    auto corrected = f.correct(framed);
    CHECK_THAT(std::abs(corrected.overlap(psi)), WithinAbs(1.0, 1e-12));
}

TEST_CASE("dump format is sorted and stable") {
    SparseState s(2, {0, 1});
    s.amps()["\x01\x00"] = 0.5;
    s.amps()[std::string("\x00\x01", 2)] = 0.5;
    auto text = s.dump();
    CHECK(text.find("01 ") < text.find("10 "));
}
