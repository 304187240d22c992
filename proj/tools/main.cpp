#include "mtsc/cli.hpp"

int main(int argc, char** argv) { return mtsc::run(argc, argv); }
