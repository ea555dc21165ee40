#include <string>
#include <vector>

#include "ricci2d/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return ricci2d::cli::run(args);
}
