#include <iostream>
#include <string>
#include <vector>

#include <fwfs/cli.hpp>

int main(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return fwfs::run(args, std::cout, std::cerr);
}
