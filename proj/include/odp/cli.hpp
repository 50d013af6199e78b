#pragma once

// Command-line front end. Subcommands are filled in as the solver stack
// lands; run() maps ConfigError to exit 2 and SolverError to exit 1.

#include <iostream>

#include "odp/errors.hpp"

namespace odp::cli {

inline int run(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::cerr << "odp: no subcommands wired yet\n";
    return 2;
}

} // namespace odp::cli
