#include "stsperf/cli.hpp"

int main(int argc, char** argv) { return stsperf::run_cli(argc, argv); }
