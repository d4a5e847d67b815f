#include "artiq_cli.hpp"

int main(int argc, char** argv) { return artiq::cli::run_cli(argc, argv); }
