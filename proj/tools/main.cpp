#include "agvjsp/cli.hpp"

int main(int argc, char** argv) { return agvjsp::cli::run(argc, argv); }
