#include "pathwise/cli.hpp"

int main(int argc, char** argv) { return pathwise::cli::main(argc, argv); }
