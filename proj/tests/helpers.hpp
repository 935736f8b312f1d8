#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "gerty/check.hpp"

namespace gerty::test {

inline std::string corpus_path(const std::string& name) {
  return std::string(GERTY_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ParsedFile parse_corpus(const std::string& name) {
  return parse_file(read_file(corpus_path(name)), name);
}

inline CheckOptions options(const std::string& semiring = "nat") {
  CheckOptions opt;
  opt.semiring = find_semiring(semiring);
  return opt;
}

inline FileReport check_corpus(const std::string& name,
                               const std::string& semiring = "nat",
                               bool optimise = false) {
  CheckOptions opt = options(semiring);
  opt.optimise = optimise;
  DefEnv defs;
  return check_declarations(parse_corpus(name), opt, defs);
}

// The bundled node shim, when its dependency has been installed.
inline std::string test_solver() {
  std::string shim = GERTY_SMT_SHIM;
  std::ifstream probe(shim);
  std::ifstream dep(shim.substr(0, shim.rfind('/')) + "/node_modules/z3-solver/package.json");
  if (probe && dep) return "node " + shim;
  return resolve_solver("");
}

}  // namespace gerty::test
