#include "lrdcma/cli.hpp"

int main(int argc, char** argv) { return lrdcma::run_cli(argc, argv); }
