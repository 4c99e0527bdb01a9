#include "plaquette/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return plaq::cli::run(std::move(args));
}
