#include "bsq/cli/commands.hpp"

int main(int argc, char** argv) { return bsq::cli::run_cli(argc, argv); }
