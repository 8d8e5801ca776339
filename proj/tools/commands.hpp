#pragma once

#include <string>

namespace annulus::cli {

/// Options shared by every verb; parsed by main and handed to the command
/// implementations.
struct Invocation {
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  unsigned long seed = 0;  // accepted for forward compatibility, unused
};

int cmd_neutral(const Invocation& inv);
int cmd_codim2(const Invocation& inv);
int cmd_diagram(const Invocation& inv);
int cmd_simulate(const Invocation& inv);
int cmd_render(const Invocation& inv);

}  // namespace annulus::cli
