#include "windsweep/cli.hpp"

int main(int argc, char** argv) { return windsweep::cli_main(argc, argv); }
