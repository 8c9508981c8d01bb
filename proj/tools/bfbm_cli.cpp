#include "bfbm/cli_runner.hpp"

int main(int argc, char** argv) { return bfbm::run_cli(argc, argv); }
