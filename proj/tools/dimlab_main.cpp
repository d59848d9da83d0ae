#include <string>
#include <vector>

#include "dimlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dimlab::run_cli(std::move(args));
}
