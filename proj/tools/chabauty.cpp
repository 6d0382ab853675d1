#include "rosc/cli.hpp"

int main(int argc, char** argv) { return rosc::run(argc, argv, std::cout, std::cerr); }
