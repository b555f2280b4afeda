#include "cpi/cli/cli.hpp"

int main(int argc, char** argv) { return cpi::cli::run(argc, argv); }
