#include "weylsum/harness/cli.hpp"

int main(int argc, char** argv) { return weylsum::harness::cli_dispatch(argc, argv); }
