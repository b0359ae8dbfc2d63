#include "srmc/cli.hpp"

int main(int argc, char** argv) { return srmc::cli_main(argc, argv); }
