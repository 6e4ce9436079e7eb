#include "cli.hpp"

int main(int argc, char** argv) { return abho::cli::run(argc, argv); }
