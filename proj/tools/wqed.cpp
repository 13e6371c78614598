#include "wqed/cli.hpp"

int main(int argc, char** argv) { return wqed::cli::run(argc, argv); }
