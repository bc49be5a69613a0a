#include "urnlab/cli.hpp"

int main(int argc, char** argv) { return urnlab::cli_main(argc, argv); }
