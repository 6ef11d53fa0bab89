#include "chanres/cli.hpp"

int main(int argc, char** argv) { return chanres::cli_main(argc, argv); }
