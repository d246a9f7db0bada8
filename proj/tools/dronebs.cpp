#include "dronebs/cli.hpp"

int main(int argc, char** argv) { return dronebs::cli::run(argc, argv); }
