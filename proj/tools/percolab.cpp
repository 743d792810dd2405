#include "percolab/cli.hpp"

int main(int argc, char** argv) { return percolab::cli::main(argc, argv); }
