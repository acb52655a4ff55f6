#include "strangeci/cli.hpp"

int main(int argc, char** argv) { return strangeci::cli::run(argc, argv); }
