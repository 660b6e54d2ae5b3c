#include "clf/cli.hpp"

int main(int argc, char** argv) { return clf::cli::run_main(argc, argv); }
