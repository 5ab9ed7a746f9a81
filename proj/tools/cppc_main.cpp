#include "cppc/cli.hpp"

int main(int argc, char** argv) { return cppc::cli_main(argc, argv); }
