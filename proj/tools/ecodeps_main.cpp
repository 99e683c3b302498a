#include <iostream>
#include <string>
#include <vector>

#include "ecodeps/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ecodeps::run(args, std::cout, std::cerr);
}
