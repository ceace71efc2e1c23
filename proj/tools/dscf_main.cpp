#include "dscf/cli.hpp"

int main(int argc, char** argv) { return dscf::cli_main(argc, argv); }
