#include "odp/cli.hpp"

int main(int argc, char** argv) { return odp::cli::run(argc, argv); }
