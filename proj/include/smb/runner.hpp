#pragma once

#include <iosfwd>
#include <string>

#include "smb/config.hpp"

namespace smb {

struct RunOptions {
  std::string command;
  std::string config_path;
  std::string out_dir;            // overrides config when nonempty
  double tolerance = -1.0;        // overrides config when >= 0
  int threads = -1;               // overrides config when >= 0
  bool debug_provenance = false;
};

// Dispatches one CLI command; writes reports/artifacts, returns the process
// exit code (0 iff every check passed).
int run(const RunOptions& opt, std::ostream& out);

}  // namespace smb
