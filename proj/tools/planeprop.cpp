#include "planeprop_cli.hpp"

int main(int argc, char** argv) { return planeprop::cli::run(argc, argv); }
