#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plaquette/cli.hpp"

using namespace plaq;

namespace {

int run_cli(std::initializer_list<std::string> args, std::string* text = nullptr) {
    std::ostringstream os;
    int code = cli::run(std::vector<std::string>(args), os);
    if (text) *text = os.str();
    return code;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("verify cocycle") {
    std::string text;
    CHECK(run_cli({"verify", "cocycle", "--group", "Z2", "--c", "1"}, &text) == 0);
    CHECK(text.find("pass") != std::string::npos);
    CHECK(text.find("1/2") != std::string::npos);  // invariant exponent = phase -1

    // c out of range is a usage error
    CHECK(run_cli({"verify", "cocycle", "--group", "Z2", "--c", "2"}) == 2);
}

TEST_CASE("verify symmetry on builtin lattices") {
    CHECK(run_cli({"verify", "symmetry", "--lattice", "builtin:kagome:1x1", "--group", "Z2",
                   "--c", "1"}) == 0);
    CHECK(run_cli({"verify", "symmetry", "--lattice", "builtin:square:2x2", "--group", "Z3",
                   "--c", "2"}) == 0);
}

TEST_CASE("verify boundary and czx") {
    CHECK(run_cli({"verify", "boundary", "--group", "Z2", "--c", "1", "--length", "4"}) == 0);
    CHECK(run_cli({"verify", "czx", "--lattice", "builtin:square:2x2", "--variant", "czx",
                   "--trials", "3"}) == 0);
    // odd parton count rejects the plain variant
    CHECK(run_cli({"verify", "czx", "--lattice", "builtin:honeycomb:2x2", "--variant", "czx"}) ==
          1);
    CHECK(run_cli({"verify", "czx", "--lattice", "builtin:honeycomb:2x2", "--variant", "sczx",
                   "--trials", "2"}) == 0);
}

TEST_CASE("reduce / teleport / route commands") {
    CHECK(run_cli({"reduce", "--lattice", "builtin:square:2x2", "--d", "2", "--pattern",
                   "checkerboard", "--policy", "exhaustive"}) == 0);
    CHECK(run_cli({"teleport", "--gate", "H", "--d", "2"}) == 0);
    CHECK(run_cli({"teleport", "--gate", "CZ", "--d", "2"}) == 0);
    CHECK(run_cli({"route", "--lattice", "builtin:square:12x12", "--spacing", "4"}) == 0);
}

TEST_CASE("run a small circuit") {
    auto dir = std::filesystem::temp_directory_path();
    auto circuit = dir / "circ.json";
    {
        std::ofstream out(circuit);
        out << R"([{"gate":"H","targets":[0]},{"gate":"H","targets":[1]},{"gate":"CZ","targets":[0,1]}])";
    }
    CHECK(run_cli({"run", "--circuit", circuit.string(), "--lattice", "builtin:square:4x4",
                   "--seed", "5"}) == 0);
    std::filesystem::remove(circuit);
}

TEST_CASE("reports are byte-identical for identical config and seed") {
    auto dir = std::filesystem::temp_directory_path();
    auto r1 = dir / "rep1.json", r2 = dir / "rep2.json";
    CHECK(run_cli({"verify", "symmetry", "--lattice", "builtin:honeycomb:2x2", "--group", "Z2",
                   "--c", "1", "--report", r1.string()}) == 0);
    CHECK(run_cli({"verify", "symmetry", "--lattice", "builtin:honeycomb:2x2", "--group", "Z2",
                   "--c", "1", "--report", r2.string()}) == 0);
    CHECK(slurp(r1.string()) == slurp(r2.string()));
    CHECK_FALSE(slurp(r1.string()).empty());
    std::filesystem::remove(r1);
    std::filesystem::remove(r2);
}

TEST_CASE("route plan files can be fed back into reduce") {
    auto dir = std::filesystem::temp_directory_path();
    auto plan = dir / "plan.json";
    CHECK(run_cli({"route", "--lattice", "builtin:square:4x4", "--spacing", "4", "--out",
                   plan.string()}) == 0);
    CHECK(run_cli({"reduce", "--lattice", "builtin:square:4x4", "--d", "2", "--pattern",
                   plan.string(), "--policy", "seed:3"}) == 0);
    std::filesystem::remove(plan);
}

TEST_CASE("capacity errors exit with code 3") {
    CHECK(run_cli({"verify", "czx", "--lattice", "builtin:square:6x6", "--max-amps", "100"}) == 3);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli({"verify", "cocycle", "--group", "Q8"}) == 2);
    CHECK(run_cli({"nonsense"}) == 2);
}
