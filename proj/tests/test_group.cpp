#include <catch2/catch_amalgamated.hpp>

#include "plaquette/group.hpp"

using namespace plaq;

TEST_CASE("cyclic arithmetic") {
    GroupSpec z2({2});
    CHECK(z2.mul(z2.element({1}), z2.element({1})) == z2.identity());

    GroupSpec z3({3});
    CHECK(z3.mul(z3.element({2}), z3.element({2})) == z3.element({1}));
    CHECK(z3.inv(z3.element({1})) == z3.element({2}));
    CHECK(z2.inv(z2.element({1})) == z2.element({1}));

    GroupSpec z5({5});
    CHECK(z5.inv(z5.element({2})) == z5.element({3}));
}

TEST_CASE("product groups") {
    GroupSpec g({2, 2});
    CHECK(g.mul(g.element({1, 0}), g.element({0, 1})) == g.element({1, 1}));
    CHECK(g.order() == 4);
}

TEST_CASE("enumerate is lexicographic and stable") {
    GroupSpec z2({2});
    auto e2 = z2.enumerate();
    REQUIRE(e2.size() == 2);
    CHECK(e2[0] == z2.element({0}));
    CHECK(e2[1] == z2.element({1}));

    GroupSpec z3({3});
    auto e3 = z3.enumerate();
    REQUIRE(e3.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(e3[i] == z3.element({i}));

    GroupSpec z22({2, 2});
    auto e = z22.enumerate();
    REQUIRE(e.size() == 4);
    CHECK(e[0] == z22.element({0, 0}));
    CHECK(e[1] == z22.element({0, 1}));
    CHECK(e[2] == z22.element({1, 0}));
    CHECK(e[3] == z22.element({1, 1}));

    for (int i = 0; i < z22.order(); ++i) CHECK(z22.index_of(e[i]) == i);
}

TEST_CASE("group laws hold exhaustively for all supported specs") {
    std::vector<GroupSpec> specs = {GroupSpec({2}), GroupSpec({3}), GroupSpec({4}),
                                    GroupSpec({5}), GroupSpec({2, 2}), GroupSpec({2, 3}),
                                    GroupSpec({12})};
    for (const auto& G : specs) {
        auto elems = G.enumerate();
        for (const auto& a : elems) {
            CHECK(G.mul(a, G.identity()) == a);
            CHECK(G.mul(a, G.inv(a)) == G.identity());
            for (const auto& b : elems) {
                CHECK(G.mul(a, b) == G.mul(b, a));
                for (const auto& c : elems)
                    CHECK(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)));
            }
        }
    }
}

TEST_CASE("order bound") {
    CHECK_THROWS_AS(GroupSpec({13}), capacity_error);
    CHECK_THROWS_AS(GroupSpec({4, 4}), capacity_error);
    CHECK_NOTHROW(GroupSpec({4, 4}, 16));
    CHECK_THROWS_AS(GroupSpec({1}), std::invalid_argument);
}

TEST_CASE("parse") {
    CHECK(GroupSpec::parse("Z2") == GroupSpec({2}));
    CHECK(GroupSpec::parse("Z2xZ3") == GroupSpec({2, 3}));
    CHECK_THROWS_AS(GroupSpec::parse("Q8"), std::invalid_argument);
    CHECK_THROWS_AS(GroupSpec::parse("Z"), std::invalid_argument);
}

TEST_CASE("mismatched specs rejected") {
    GroupSpec z2({2}), z22({2, 2});
    CHECK_THROWS_AS(z2.mul(z2.element({1}), z22.element({1, 0})), std::invalid_argument);
}
