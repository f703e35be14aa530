#include "scanpath/cli.hpp"

int main(int argc, char** argv) { return scanpath::cli::run(argc, argv); }
