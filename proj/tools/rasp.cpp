#include <iostream>

#include "rasp/session.hpp"

int main(int argc, char** argv) { return rasp::cli::run_main(argc, argv, std::cout, std::cerr); }
