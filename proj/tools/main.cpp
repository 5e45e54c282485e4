#include "growthlift/cli.hpp"

int main(int argc, char** argv) { return growthlift::cli_main(argc, argv); }
