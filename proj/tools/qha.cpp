#include "qha/cli.hpp"

int main(int argc, char** argv) { return qha::cli::run_subcommand(argc, argv); }
