#include <string>
#include <vector>

#include "hctab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hctab::run_cli(args);
}
