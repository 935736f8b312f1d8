#pragma once

#include <string>
#include <vector>

namespace gerty {

// Shared orchestration behind the C API and the CLI.
struct DriverOptions {
  std::string semiring = "nat";     // overridden by a file's %semiring pragma
  std::string equality = "normal";  // normal | smt
  bool optimise = false;
  bool debug_elision = false;
  std::string solver_cmd;
  long fuel = 100000;
  uint64_t seed = 42;
  std::string csv_path;             // bench output; empty = stdout
  std::string arities = "3..8";
  int trials = 10;
  int cases = 300;
  std::string suite = "subst";
  std::string target = "stlc";      // translate target
};

struct DriverResult {
  int code = 0;          // 0 ok; 1 parse/type errors; 2 configuration errors
  std::string output;
  std::string diagnostics;
};

DriverResult drive(const DriverOptions& opt, const std::string& command,
                   const std::vector<std::string>& args);

}  // namespace gerty
