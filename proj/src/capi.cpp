#include "gerty/capi.h"

#include <cstring>
#include <string>
#include <vector>

#include "gerty/driver.hpp"

struct gerty_options {
  gerty::DriverOptions opts;
};

struct gerty_result {
  int code = 0;
  std::string output;
  std::string diagnostics;
};

extern "C" {

gerty_options* gerty_options_new(void) { return new gerty_options(); }

void gerty_options_free(gerty_options* opts) { delete opts; }

int gerty_options_set(gerty_options* opts, const char* key, const char* value) {
  if (!opts || !key || !value) return 1;
  std::string k = key, v = value;
  auto& o = opts->opts;
  try {
    if (k == "semiring") o.semiring = v;
    else if (k == "equality") o.equality = v;
    else if (k == "optimize") o.optimise = (v == "1" || v == "true");
    else if (k == "debug-elision") o.debug_elision = (v == "1" || v == "true");
    else if (k == "smt-solver") o.solver_cmd = v;
    else if (k == "fuel") o.fuel = std::stol(v);
    else if (k == "seed") o.seed = std::stoull(v);
    else if (k == "csv") o.csv_path = v;
    else if (k == "arities") o.arities = v;
    else if (k == "trials") o.trials = std::stoi(v);
    else if (k == "cases") o.cases = std::stoi(v);
    else if (k == "suite") o.suite = v;
    else if (k == "target") o.target = v;
    else return 1;
  } catch (const std::exception&) {
    return 1;
  }
  return 0;
}

gerty_result* gerty_run(const gerty_options* opts, const char* command,
                        const char* const* args, int nargs) {
  auto* res = new gerty_result();
  if (!command) {
    res->code = GERTY_ERR_CONFIG;
    res->diagnostics = "missing command\n";
    return res;
  }
  gerty::DriverOptions o = opts ? opts->opts : gerty::DriverOptions{};
  std::vector<std::string> a;
  for (int i = 0; i < nargs; ++i)
    if (args && args[i]) a.emplace_back(args[i]);
  gerty::DriverResult r = gerty::drive(o, command, a);
  res->code = r.code;
  res->output = std::move(r.output);
  res->diagnostics = std::move(r.diagnostics);
  return res;
}

int gerty_result_code(const gerty_result* res) { return res ? res->code : GERTY_ERR_CONFIG; }

const char* gerty_result_output(const gerty_result* res) {
  return res ? res->output.c_str() : "";
}

const char* gerty_result_diagnostics(const gerty_result* res) {
  return res ? res->diagnostics.c_str() : "";
}

void gerty_result_free(gerty_result* res) { delete res; }

const char* gerty_version(void) { return "gerty 0.1.0"; }

}  // extern "C"
