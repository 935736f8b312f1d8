#include "gerty/driver.hpp"

#include <fstream>
#include <sstream>

#include "gerty/bench.hpp"
#include "gerty/embed.hpp"
#include "gerty/oracle.hpp"

namespace gerty {

namespace {

struct Resolved {
  CheckOptions check;
  ParsedFile file;
};

Resolved load(const DriverOptions& opt, const std::string& path, bool record = false) {
  Resolved r;
  r.file = parse_file_at(path);
  std::string semiring = r.file.semiring.value_or(opt.semiring);
  const SemiringSpec* sr = find_semiring(semiring);
  if (!sr)
    throw GertyError(ErrorCode::ConfigError,
                     "unknown semiring '" + semiring +
                         "' (expected nat, zero-one, none-one-tons, security, "
                         "singleton)");
  r.check.semiring = sr;
  if (opt.equality == "smt") {
    r.check.backend = EqualityBackend::Smt;
    r.check.solver_cmd = resolve_solver(opt.solver_cmd);
    if (r.check.solver_cmd.empty())
      throw GertyError(ErrorCode::SolverUnavailable,
                       "no SMT solver available; pass --smt-solver or install z3");
  } else if (opt.equality != "normal") {
    throw GertyError(ErrorCode::ConfigError,
                     "unknown equality backend '" + opt.equality +
                         "' (expected normal or smt)");
  }
  r.check.optimise = opt.optimise;
  r.check.debug_elision = opt.debug_elision;
  r.check.fuel = opt.fuel;
  r.check.record_derivations = record;
  return r;
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::SolverUnavailable:
    case ErrorCode::SolverUnknown: return 2;
    default: return 1;
  }
}

DriverResult run_check(const DriverOptions& opt, const std::vector<std::string>& args) {
  DriverResult out;
  if (args.empty())
    throw GertyError(ErrorCode::ConfigError, "check: expected a file argument");
  Resolved r = load(opt, args[0]);
  DefEnv defs;
  FileReport rep = check_declarations(r.file, r.check, defs);
  std::ostringstream ok, bad;
  for (const auto& d : rep.decls) {
    if (d.ok) ok << "checked " << d.name << "\n";
    else bad << d.name << ": " << d.error << "\n";
  }
  out.output = ok.str();
  out.diagnostics = bad.str();
  out.code = rep.ok() ? 0 : 1;
  return out;
}

DriverResult run_eval(const DriverOptions& opt, const std::vector<std::string>& args) {
  DriverResult out;
  if (args.size() < 2)
    throw GertyError(ErrorCode::ConfigError, "eval: expected a file and a name");
  Resolved r = load(opt, args[0]);
  DefEnv defs;
  FileReport rep = check_declarations(r.file, r.check, defs);
  if (!rep.ok()) {
    for (const auto& d : rep.decls)
      if (!d.ok) out.diagnostics += d.name + ": " + d.error + "\n";
    out.code = 1;
    return out;
  }
  const DefEnv::Def* def = defs.find(args[1]);
  if (!def)
    throw GertyError(ErrorCode::ConfigError, "no declaration named '" + args[1] + "'");
  TermPtr nf = normalize(def->body, &defs, opt.fuel);
  out.output = pretty(nf) + "\n";
  return out;
}

DriverResult run_translate(const DriverOptions& opt,
                           const std::vector<std::string>& args) {
  DriverResult out;
  if (args.size() < 2)
    throw GertyError(ErrorCode::ConfigError, "translate: expected a file and a name");
  Resolved r = load(opt, args[0], /*record=*/true);
  DefEnv defs;
  FileReport rep = check_declarations(r.file, r.check, defs);
  const DeclReport* decl = nullptr;
  for (const auto& d : rep.decls) {
    if (!d.ok) {
      out.diagnostics += d.name + ": " + d.error + "\n";
      out.code = 1;
      return out;
    }
    if (d.name == args[1]) decl = &d;
  }
  if (!decl)
    throw GertyError(ErrorCode::ConfigError, "no declaration named '" + args[1] + "'");
  if (opt.target == "stlc") {
    StlcResult res = stlc_translate(decl->body_deriv, *r.check.semiring);
    out.output = show_stlc(res.term) + "\n : " + show_simple(res.type) + "\n";
  } else if (opt.target == "ssf") {
    SsfResult res = ssf_translate(decl->body_deriv, *r.check.semiring);
    out.output = show_ssf(res.term) + "\n : " + show_ssf_type(res.type) + "\n";
  } else {
    throw GertyError(ErrorCode::ConfigError,
                     "unknown translation target '" + opt.target + "'");
  }
  return out;
}

std::vector<int> parse_arities(const std::string& s) {
  std::vector<int> out;
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    int lo = std::stoi(s.substr(0, dots));
    int hi = std::stoi(s.substr(dots + 2));
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
  }
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
  return out;
}

DriverResult run_bench_cmd(const DriverOptions& opt) {
  DriverResult out;
  BenchConfig cfg;
  cfg.arities = parse_arities(opt.arities);
  if (cfg.arities.empty())
    throw GertyError(ErrorCode::ConfigError, "bench: empty arity list");
  cfg.trials = opt.trials;
  if (cfg.trials < 1)
    throw GertyError(ErrorCode::ConfigError, "bench: trials must be >= 1");
  const SemiringSpec* sr = find_semiring(opt.semiring);
  if (!sr) throw GertyError(ErrorCode::ConfigError, "unknown semiring");
  cfg.semiring = sr;
  std::string backend_name = "normal";
  if (opt.equality == "smt") {
    cfg.backend = EqualityBackend::Smt;
    cfg.solver_cmd = opt.solver_cmd;
    backend_name = "smt";
  }
  std::vector<BenchRow> rows = run_bench(cfg);
  std::string csv = bench_csv(rows, backend_name);
  if (!opt.csv_path.empty()) {
    std::ofstream f(opt.csv_path);
    if (!f)
      throw GertyError(ErrorCode::ConfigError, "cannot write " + opt.csv_path);
    f << csv;
    out.output = "wrote " + opt.csv_path + "\n";
  } else {
    out.output = csv;
  }
  return out;
}

DriverResult run_selftest(const DriverOptions& opt) {
  DriverResult out;
  const SemiringSpec* sr = find_semiring(opt.semiring);
  if (!sr) throw GertyError(ErrorCode::ConfigError, "unknown semiring");
  SuiteResult res;
  if (opt.suite == "subst") res = subst_lemma_suite(opt.seed, opt.cases, *sr);
  else if (opt.suite == "structural") res = structural_suite(opt.seed, opt.cases, *sr);
  else if (opt.suite == "preservation")
    res = preservation_suite(opt.seed, opt.cases, *sr);
  else if (opt.suite == "agreement") res = agreement_suite(opt.seed, opt.cases, *sr);
  else if (opt.suite == "wf") res = wf_assumption_suite(opt.seed, opt.cases, *sr);
  else if (opt.suite == "termination")
    res = termination_suite(opt.seed, opt.cases, *sr, opt.fuel);
  else
    throw GertyError(ErrorCode::ConfigError,
                     "unknown suite '" + opt.suite +
                         "' (subst, structural, preservation, agreement, wf, "
                         "termination)");
  std::ostringstream o;
  o << "suite " << opt.suite << ": " << res.cases << " cases, " << res.failures
    << " failures\n";
  for (const auto& m : res.messages) o << "  " << m << "\n";
  out.output = o.str();
  out.code = res.ok() ? 0 : 1;
  return out;
}

}  // namespace

DriverResult drive(const DriverOptions& opt, const std::string& command,
                   const std::vector<std::string>& args) {
  try {
    if (command == "check") return run_check(opt, args);
    if (command == "eval") return run_eval(opt, args);
    if (command == "translate") return run_translate(opt, args);
    if (command == "bench") return run_bench_cmd(opt);
    if (command == "selftest") return run_selftest(opt);
    throw GertyError(ErrorCode::ConfigError, "unknown command '" + command + "'");
  } catch (const GertyError& e) {
    DriverResult out;
    out.code = exit_code_for(e.code);
    out.diagnostics = e.render() + "\n";
    return out;
  } catch (const std::exception& e) {
    DriverResult out;
    out.code = 2;
    out.diagnostics = std::string(e.what()) + "\n";
    return out;
  }
}

}  // namespace gerty
