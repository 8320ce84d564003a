#include <cstdio>
#include <string>
#include <vector>

#include "bell/cli.hpp"
#include "bell/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  bell::cli::CommandResult res = bell::cli::run(args);
  bool json_only = false;
  for (const auto& a : args)
    if (a == "--json") json_only = true;
  if (json_only && !res.payload.is_null()) {
    std::printf("%s\n", bell::io::dump17(res.payload, 1).c_str());
  } else {
    std::fputs(res.table.c_str(), stdout);
  }
  return res.exit_code;
}
