#include <iostream>

#include "connectgraph/cli.hpp"

int main(int argc, char** argv) { return connectgraph::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
