#include <string>
#include <vector>

#include "chaoskit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chaoskit::cli::run(args);
}
