#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "christoffel/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    christoffel::cli::Environment env;
    if (const char* tol = std::getenv("CHRISTOFFEL_TOL")) env.tolerance = tol;
    return christoffel::cli::run(args, std::cin, std::cout, std::cerr, env);
}
