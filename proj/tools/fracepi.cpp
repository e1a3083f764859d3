#include <iostream>

#include "fracepi/app.hpp"

int main(int argc, char** argv) {
  return fracepi::app::run(argc, argv, std::cout, std::cerr);
}
