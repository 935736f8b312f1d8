#include "gerty/constraint.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>

namespace gerty {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Subject: return "subject";
    case Stage::SubjectType: return "subject-type";
    case Stage::Context: return "context";
  }
  return "subject";
}

namespace {

std::string show_computed(const GradePtr& g, const SemiringSpec* s) {
  if (s && !grade_has_meta(g)) {
    GradeValue v = eval_grade(g, *s);
    if (v.is_nat) return "." + v.nat.get_str();
    if (v == s->one) return ".1";
    if (v == s->zero) return ".0";
    return s->show(v);
  }
  return show_grade(g);
}

}  // namespace

std::string render_grade_mismatch(const Provenance& prov, const GradePtr& expected,
                                  const GradePtr& got, const SemiringSpec* s) {
  std::string var = prov.var;
  auto dollar = var.find('$');
  if (dollar != std::string::npos) var.resize(dollar);
  return std::string("At ") + stage_name(prov.stage) +
         " stage got the following mismatched grades:\n For '" + var + "' expected " +
         show_grade(expected) + " but got " + show_computed(got, s);
}

GradePtr apply_assignment(const GradePtr& g, const std::map<int, GradePtr>& assignment) {
  if (assignment.empty()) return g;
  switch (g->kind) {
    case GradeKind::Meta: {
      auto it = assignment.find(g->meta);
      return it == assignment.end() ? g : it->second;
    }
    case GradeKind::Add: {
      GradePtr a = apply_assignment(g->lhs, assignment);
      GradePtr b = apply_assignment(g->rhs, assignment);
      return (a == g->lhs && b == g->rhs) ? g : g_add(a, b);
    }
    case GradeKind::Mul: {
      GradePtr a = apply_assignment(g->lhs, assignment);
      GradePtr b = apply_assignment(g->rhs, assignment);
      return (a == g->lhs && b == g->rhs) ? g : g_mul(a, b);
    }
    default: return g;
  }
}

// ---------------------------------------------------------------------------
// Syntactic backend
// ---------------------------------------------------------------------------

Solution solve_syntactic(const std::vector<Constraint>& cs, const SemiringSpec& s,
                         const std::vector<int>& all_metas) {
  Solution sol;
  std::vector<Constraint> pending = cs;
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<Constraint> next;
    for (const auto& c : pending) {
      GradePtr l = normalize_grade(apply_assignment(c.left, sol.assignment));
      GradePtr r = normalize_grade(apply_assignment(c.right, sol.assignment));
      bool lm = grade_has_meta(l), rm = grade_has_meta(r);
      if (!lm && !rm) {
        if (eval_grade(l, s) != eval_grade(r, s))
          throw GertyError(ErrorCode::Unsatisfiable,
                           render_grade_mismatch(c.prov, l, r, &s), c.prov.span);
        progress = true;
        continue;
      }
      if (l->kind == GradeKind::Meta && !rm) {
        sol.assignment[l->meta] = r;
        progress = true;
        continue;
      }
      if (r->kind == GradeKind::Meta && !lm) {
        sol.assignment[r->meta] = l;
        progress = true;
        continue;
      }
      if (l->kind == GradeKind::Meta && r->kind == GradeKind::Meta) {
        if (l->meta == r->meta) { progress = true; continue; }
        sol.assignment[l->meta] = r;
        progress = true;
        continue;
      }
      next.push_back(c);
    }
    pending = std::move(next);
  }
  if (!pending.empty()) {
    const auto& c = pending.front();
    throw GertyError(
        ErrorCode::Unsatisfiable,
        "cannot decide grade constraint " +
            show_grade(apply_assignment(c.left, sol.assignment)) + " = " +
            show_grade(apply_assignment(c.right, sol.assignment)) +
            " under the normalisation backend\n" +
            render_grade_mismatch(c.prov, c.left, c.right, &s),
        c.prov.span);
  }
  // Chase meta-to-meta bindings, then default genuinely unconstrained
  // metavariables to 0.
  for (auto& [id, g] : sol.assignment)
    sol.assignment[id] = normalize_grade(apply_assignment(g, sol.assignment));
  for (int m : all_metas)
    if (!sol.assignment.count(m)) sol.assignment[m] = g_zero();
  for (auto& [id, g] : sol.assignment)
    if (grade_has_meta(g)) g = g_zero();
  return sol;
}

// ---------------------------------------------------------------------------
// SMT backend
// ---------------------------------------------------------------------------

namespace {

std::string smt_elem(int idx) { return "E" + std::to_string(idx); }

void emit_grade(std::ostringstream& out, const GradePtr& g, const SemiringSpec& s) {
  switch (g->kind) {
    case GradeKind::Zero:
      if (s.finite()) out << smt_elem(s.zero.fin);
      else out << "0";
      return;
    case GradeKind::One:
      if (s.finite()) out << smt_elem(s.one.fin);
      else out << "1";
      return;
    case GradeKind::Add:
      out << (s.finite() ? "(sadd " : "(+ ");
      emit_grade(out, g->lhs, s);
      out << " ";
      emit_grade(out, g->rhs, s);
      out << ")";
      return;
    case GradeKind::Mul:
      out << (s.finite() ? "(smul " : "(* ");
      emit_grade(out, g->lhs, s);
      out << " ";
      emit_grade(out, g->rhs, s);
      out << ")";
      return;
    case GradeKind::Lit: {
      auto idx = s.element(g->lit);
      if (!idx)
        throw GertyError(ErrorCode::ForeignLiteral,
                         "grade literal '" + g->lit + "' is not an element of semiring '" +
                             s.name + "'",
                         g->span);
      out << smt_elem(*idx);
      return;
    }
    case GradeKind::Meta: out << "m" << g->meta; return;
  }
}

std::string table_fun(const SemiringSpec& s, const std::string& name,
                      const std::function<GradeValue(const GradeValue&, const GradeValue&)>& op) {
  std::ostringstream out;
  out << "(define-fun " << name << " ((a S) (b S)) S\n";
  int n = (int)s.carrier.size();
  std::string body;
  // Nested ite over all argument pairs; the final pair is the else branch.
  std::vector<std::string> cases;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      GradeValue v = op(GradeValue::finite(i), GradeValue::finite(j));
      cases.push_back("(and (= a " + smt_elem(i) + ") (= b " + smt_elem(j) + ")) " +
                      smt_elem(v.fin));
    }
  body = smt_elem(op(GradeValue::finite(n - 1), GradeValue::finite(n - 1)).fin);
  for (int k = (int)cases.size() - 2; k >= 0; --k)
    body = "(ite " + cases[k] + " " + body + ")";
  out << "  " << body << ")\n";
  return out.str();
}

// Minimal s-expression tokenizer for model / core parsing.
std::vector<std::string> sexp_tokens(const std::string& text) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == ')') {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
      toks.push_back(std::string(1, c));
    } else if (isspace((unsigned char)c)) {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) toks.push_back(cur);
  return toks;
}

}  // namespace

std::string smt_script(const std::vector<Constraint>& cs, const SemiringSpec& s,
                       const std::vector<int>& all_metas) {
  std::ostringstream out;
  out << "(set-option :produce-unsat-cores true)\n";
  std::set<int> metas(all_metas.begin(), all_metas.end());
  for (const auto& c : cs) {
    std::vector<int> ms;
    grade_metas(c.left, ms);
    grade_metas(c.right, ms);
    metas.insert(ms.begin(), ms.end());
  }
  if (s.finite()) {
    out << "(declare-datatypes ((S 0)) ((";
    for (size_t i = 0; i < s.carrier.size(); ++i) out << "(" << smt_elem((int)i) << ")";
    out << ")))\n";
    out << table_fun(s, "sadd", s.add);
    out << table_fun(s, "smul", s.mul);
    for (int m : metas) out << "(declare-const m" << m << " S)\n";
  } else {
    for (int m : metas) {
      out << "(declare-const m" << m << " Int)\n";
      out << "(assert (>= m" << m << " 0))\n";
    }
  }
  int i = 0;
  for (const auto& c : cs) {
    out << "(assert (! (= ";
    emit_grade(out, c.left, s);
    out << " ";
    emit_grade(out, c.right, s);
    out << ") :named c" << i++ << "))\n";
  }
  out << "(check-sat)\n";
  out << "(get-unsat-core)\n";
  if (!metas.empty()) {
    out << "(get-value (";
    bool first = true;
    for (int m : metas) {
      if (!first) out << " ";
      out << "m" << m;
      first = false;
    }
    out << "))\n";
  }
  return out.str();
}

std::string resolve_solver(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("GERTY_SMT_SOLVER"); env && *env) return env;
  if (std::system("command -v z3 >/dev/null 2>&1") == 0) return "z3";
#ifdef GERTY_SMT_SHIM_DEFAULT
  {
    std::ifstream shim(GERTY_SMT_SHIM_DEFAULT);
    if (shim && std::system("command -v node >/dev/null 2>&1") == 0)
      return std::string("node ") + GERTY_SMT_SHIM_DEFAULT;
  }
#endif
  return "";
}

namespace {

// Resident solver process speaking the bundled shim's framed protocol:
// one script per declaration batch, each evaluated in a fresh solver
// context. Amortizes the interpreter/WASM boot across declarations.
class SolverSession {
public:
  static SolverSession* get(const std::string& cmd) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<SolverSession>> pool;
    std::lock_guard<std::mutex> lock(mu);
    auto it = pool.find(cmd);
    if (it != pool.end()) return it->second->alive_ ? it->second.get() : nullptr;
    auto session = std::unique_ptr<SolverSession>(new SolverSession(cmd));
    SolverSession* out = session->alive_ ? session.get() : nullptr;
    pool[cmd] = std::move(session);
    return out;
  }

  std::string eval(const std::string& script) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!alive_) throw GertyError(ErrorCode::SolverUnavailable, "solver session died");
    std::string framed = script + "\n;;;END;;;\n";
    if (fwrite(framed.data(), 1, framed.size(), to_) != framed.size() ||
        fflush(to_) != 0) {
      alive_ = false;
      throw GertyError(ErrorCode::SolverUnavailable, "cannot write to the solver");
    }
    std::string out;
    char line[8192];
    while (fgets(line, sizeof line, from_)) {
      if (std::string(line) == ";;;DONE;;;\n") {
        if (getenv("GERTY_SMT_TRACE"))
          fprintf(stderr, "<<< frame answer:\n%s<<< end\n", out.c_str());
        return out;
      }
      out += line;
    }
    alive_ = false;
    throw GertyError(ErrorCode::SolverUnavailable, "solver closed its output");
  }

  ~SolverSession() {
    if (to_) fclose(to_);
    if (from_) fclose(from_);
    if (pid_ > 0) waitpid(pid_, nullptr, 0);
  }

private:
  explicit SolverSession(const std::string& cmd) {
    std::vector<std::string> words;
    std::istringstream ss(cmd);
    std::string w;
    while (ss >> w) words.push_back(w);
    words.push_back("--server");
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) return;
    pid_ = fork();
    if (pid_ < 0) return;
    if (pid_ == 0) {
      dup2(in_pipe[0], 0);
      dup2(out_pipe[1], 1);
      close(in_pipe[0]);
      close(in_pipe[1]);
      close(out_pipe[0]);
      close(out_pipe[1]);
      std::vector<char*> argv;
      for (auto& word : words) argv.push_back(word.data());
      argv.push_back(nullptr);
      execvp(argv[0], argv.data());
      _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_ = fdopen(in_pipe[1], "w");
    from_ = fdopen(out_pipe[0], "r");
    alive_ = to_ && from_;
    if (alive_) {
      // Probe: a trivial script should answer promptly.
      try {
        std::string probe = eval("(check-sat)");
        alive_ = probe.find("sat") != std::string::npos;
      } catch (const GertyError&) {
        alive_ = false;
      }
    }
  }

  FILE* to_ = nullptr;
  FILE* from_ = nullptr;
  pid_t pid_ = -1;
  bool alive_ = false;
  std::mutex mu_;
};

bool shim_command(const std::string& cmd) {
  return cmd.size() >= 4 && cmd.rfind(".mjs") == cmd.size() - 4;
}

}  // namespace

namespace {
Solution solve_smt_once(const std::vector<Constraint>& cs, const SemiringSpec& s,
                        const std::string& solver_cmd,
                        const std::vector<int>& all_metas);
}  // namespace

Solution solve_smt(const std::vector<Constraint>& cs, const SemiringSpec& s,
                   const std::string& solver_cmd, const std::vector<int>& all_metas) {
  // Collect every metavariable the model must cover.
  std::set<int> wanted(all_metas.begin(), all_metas.end());
  for (const auto& c : cs) {
    std::vector<int> ms;
    grade_metas(c.left, ms);
    grade_metas(c.right, ms);
    wanted.insert(ms.begin(), ms.end());
  }
  for (int attempt = 0;; ++attempt) {
    Solution sol = solve_smt_once(cs, s, solver_cmd, all_metas);
    bool complete = true;
    for (int m : wanted)
      if (!sol.assignment.count(m)) complete = false;
    // The WASM solver bridge very occasionally truncates the model
    // output; the script is stateless, so retry once.
    if (complete || attempt >= 1) {
      for (int m : all_metas)
        if (!sol.assignment.count(m)) sol.assignment[m] = g_zero();
      return sol;
    }
  }
}

namespace {
Solution solve_smt_once(const std::vector<Constraint>& cs, const SemiringSpec& s,
                        const std::string& solver_cmd,
                        const std::vector<int>& all_metas) {
  if (solver_cmd.empty())
    throw GertyError(ErrorCode::SolverUnavailable,
                     "no SMT solver configured (set --smt-solver or GERTY_SMT_SOLVER)");
  std::string script = smt_script(cs, s, all_metas);

  std::string output;
  int rc = 0;
  if (shim_command(solver_cmd)) {
    SolverSession* session = SolverSession::get(solver_cmd);
    if (!session)
      throw GertyError(ErrorCode::SolverUnavailable,
                       "cannot start solver session: " + solver_cmd);
    output = session->eval(script);
  } else {
    char path[] = "/tmp/gerty-smt-XXXXXX";
    int fd = mkstemp(path);
    if (fd < 0)
      throw GertyError(ErrorCode::SolverUnavailable, "cannot create temp file");
    close(fd);
    {
      std::ofstream out(path);
      out << script;
    }
    std::string cmd = solver_cmd + " " + path + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
      std::remove(path);
      throw GertyError(ErrorCode::SolverUnavailable, "cannot run solver: " + solver_cmd);
    }
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    rc = pclose(pipe);
    std::remove(path);
  }

  // First non-error line is the verdict.
  std::istringstream lines(output);
  std::string line, verdict;
  std::string rest;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    if (verdict.empty() && line.rfind("(error", 0) != 0) {
      verdict = line;
      continue;
    }
    if (line.rfind("(error", 0) == 0) continue;
    rest += line + "\n";
  }
  if (verdict != "sat" && verdict != "unsat" && verdict != "unknown") {
    throw GertyError(ErrorCode::SolverUnavailable,
                     "solver '" + solver_cmd + "' failed (exit " + std::to_string(rc) +
                         "): " + output.substr(0, 400));
  }
  if (verdict == "unknown")
    throw GertyError(ErrorCode::SolverUnknown,
                     "SMT solver returned 'unknown'; treating the declaration as failed");
  if (verdict == "unsat") {
    // Map the first core label back to its constraint for provenance.
    auto toks = sexp_tokens(rest);
    for (const auto& t : toks) {
      if (t.size() > 1 && t[0] == 'c' && isdigit((unsigned char)t[1])) {
        size_t idx = std::stoul(t.substr(1));
        if (idx < cs.size()) {
          const auto& c = cs[idx];
          throw GertyError(ErrorCode::Unsatisfiable,
                           render_grade_mismatch(c.prov, c.left, c.right, &s), c.prov.span);
        }
      }
    }
    if (!cs.empty())
      throw GertyError(ErrorCode::Unsatisfiable,
                       render_grade_mismatch(cs.front().prov, cs.front().left,
                                             cs.front().right, &s),
                       cs.front().prov.span);
    throw GertyError(ErrorCode::Unsatisfiable, "unsatisfiable grade constraints");
  }

  Solution sol;
  // Model lines look like ((m0 2) (m1 E1)); negatives like (- 1) cannot
  // occur (non-negativity is asserted).
  auto toks = sexp_tokens(rest);
  for (size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i].size() > 1 && toks[i][0] == 'm' && isdigit((unsigned char)toks[i][1])) {
      int id = std::stoi(toks[i].substr(1));
      const std::string& val = toks[i + 1];
      if (val == "(" || val == ")") continue;
      if (s.finite()) {
        if (val.size() > 1 && val[0] == 'E') {
          int fin = std::stoi(val.substr(1));
          sol.assignment[id] = g_lit(s.carrier[fin]);
        }
      } else {
        sol.assignment[id] = g_num(mpz_class(val));
      }
    }
  }
  return sol;
}
}  // namespace

}  // namespace gerty
