#include "gphi/cli.hpp"

int main(int argc, char** argv) { return gphi::run_cli(argc, argv); }
