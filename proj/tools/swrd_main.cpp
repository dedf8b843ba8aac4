#include "swrd/cli.hpp"

int main(int argc, char** argv) { return swrd::cli::run(argc, argv); }
