#include "gerty/parse.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gerty {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  Ident, Int, DotInt, LParen, RParen, LAngle, RAngle, LBracket, RBracket,
  Comma, Colon, Arrow, Backslash, Star, Plus, Equals, Underscore,
  KwType, KwCase, KwOf, KwLet, KwIn, Pragma, Eof,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::DotInt: return "grade numeral";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LAngle: return "'<'";
    case Tok::RAngle: return "'>'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Backslash: return "'\\'";
    case Tok::Star: return "'*'";
    case Tok::Plus: return "'+'";
    case Tok::Equals: return "'='";
    case Tok::Underscore: return "'_'";
    case Tok::KwType: return "'Type'";
    case Tok::KwCase: return "'case'";
    case Tok::KwOf: return "'of'";
    case Tok::KwLet: return "'let'";
    case Tok::KwIn: return "'in'";
    case Tok::Pragma: return "pragma";
    case Tok::Eof: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

std::vector<Token> lex(const std::string& text, const std::string& file) {
  std::vector<Token> toks;
  int line = 1, col = 1;
  size_t i = 0;
  auto span_here = [&](int len) {
    SourceSpan s;
    s.file = file;
    s.line = s.end_line = line;
    s.col = col;
    s.end_col = col + len;
    return s;
  };
  auto push = [&](Tok k, std::string t) {
    toks.push_back({k, t, span_here((int)t.size())});
    col += (int)t.size();
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (c == ' ' || c == '\t' || c == '\r') { ++i; ++col; continue; }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') { ++i; ++col; }
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(Tok::Arrow, "->"); i += 2; continue;
    }
    if (c == '.' && i + 1 < text.size() && isdigit((unsigned char)text[i + 1])) {
      size_t j = i + 1;
      while (j < text.size() && isdigit((unsigned char)text[j])) ++j;
      push(Tok::DotInt, text.substr(i + 1, j - i - 1));
      // account for the dot, which push did not see
      toks.back().span.end_col += 1;
      ++col;
      i = j;
      continue;
    }
    if (isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < text.size() && isdigit((unsigned char)text[j])) ++j;
      push(Tok::Int, text.substr(i, j - i));
      i = j;
      continue;
    }
    bool underscored_ident =
        c == '_' && i + 1 < text.size() &&
        (isalnum((unsigned char)text[i + 1]) || text[i + 1] == '_');
    if (isalpha((unsigned char)c) || underscored_ident) {
      size_t j = i;
      while (j < text.size() &&
             (isalnum((unsigned char)text[j]) || text[j] == '_' || text[j] == '\''))
        ++j;
      std::string w = text.substr(i, j - i);
      Tok k = Tok::Ident;
      if (w == "Type") k = Tok::KwType;
      else if (w == "case") k = Tok::KwCase;
      else if (w == "of") k = Tok::KwOf;
      else if (w == "let") k = Tok::KwLet;
      else if (w == "in") k = Tok::KwIn;
      push(k, w);
      i = j;
      continue;
    }
    if (c == '%') {
      size_t j = i + 1;
      while (j < text.size() && isalpha((unsigned char)text[j])) ++j;
      push(Tok::Pragma, text.substr(i + 1, j - i - 1));
      ++col;
      i = j;
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "("); break;
      case ')': push(Tok::RParen, ")"); break;
      case '<': push(Tok::LAngle, "<"); break;
      case '>': push(Tok::RAngle, ">"); break;
      case '[': push(Tok::LBracket, "["); break;
      case ']': push(Tok::RBracket, "]"); break;
      case ',': push(Tok::Comma, ","); break;
      case ':': push(Tok::Colon, ":"); break;
      case '\\': push(Tok::Backslash, "\\"); break;
      case '*': push(Tok::Star, "*"); break;
      case '+': push(Tok::Plus, "+"); break;
      case '=': push(Tok::Equals, "="); break;
      case '_': push(Tok::Underscore, "_"); break;
      default: {
        SourceSpan s = span_here(1);
        throw GertyError(ErrorCode::ParseError,
                         s.str() + ": parse error: unexpected character '" +
                             std::string(1, c) + "'",
                         s);
      }
    }
    ++i;
  }
  Token eof{Tok::Eof, "", {}};
  eof.span.file = file;
  eof.span.line = eof.span.end_line = line;
  eof.span.col = eof.span.end_col = col;
  toks.push_back(eof);
  return toks;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
  Parser(std::vector<Token> toks, std::string file)
      : toks_(std::move(toks)), file_(std::move(file)) {}

  ParsedFile file() {
    ParsedFile out;
    if (at(Tok::Pragma)) {
      if (cur().text != "semiring") fail("'%semiring'");
      advance();
      out.semiring = expect(Tok::Ident, "semiring name").text;
    }
    std::map<std::string, size_t> by_name;
    while (!at(Tok::Eof)) {
      Token name = expect(Tok::Ident, "declaration name");
      if (at(Tok::Colon)) {
        advance();
        TermPtr sig = expr();
        if (by_name.count(name.text))
          throw err(name.span, "duplicate signature for '" + name.text + "'");
        by_name[name.text] = out.decls.size();
        out.decls.push_back({name.text, sig, nullptr, name.span});
      } else if (at(Tok::Equals)) {
        advance();
        TermPtr body = expr();
        auto it = by_name.find(name.text);
        if (it == by_name.end())
          throw err(name.span, "definition of '" + name.text + "' has no signature");
        if (out.decls[it->second].body)
          throw err(name.span, "duplicate definition of '" + name.text + "'");
        out.decls[it->second].body = body;
      } else {
        fail("':' or '='");
      }
    }
    for (const auto& d : out.decls)
      if (!d.body)
        throw err(d.span, "declaration '" + d.name + "' has a signature but no definition");
    out.next_meta = next_meta_;
    return out;
  }

  TermPtr single_term() {
    TermPtr t = expr();
    expect(Tok::Eof, "end of input");
    return t;
  }

private:
  std::vector<Token> toks_;
  std::string file_;
  size_t pos_ = 0;
  int next_meta_ = 1;
  // deepest failure position and what was expected there
  size_t far_pos_ = 0;
  std::set<std::string> far_expected_;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  void advance() { if (pos_ + 1 < toks_.size()) ++pos_; }

  void note_expected(const std::string& what) {
    if (pos_ > far_pos_) { far_pos_ = pos_; far_expected_.clear(); }
    if (pos_ == far_pos_) far_expected_.insert(what);
  }

  GertyError err(const SourceSpan& span, const std::string& msg) {
    return GertyError(ErrorCode::ParseError, span.str() + ": parse error: " + msg, span);
  }

  [[noreturn]] void fail(const std::string& expected) {
    note_expected(expected);
    const Token& t = toks_[far_pos_];
    std::string what = "expected ";
    bool first = true;
    for (const auto& e : far_expected_) {
      if (!first) what += " or ";
      what += e;
      first = false;
    }
    what += ", found " + std::string(tok_name(t.kind));
    throw err(t.span, what);
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    Token t = cur();
    advance();
    return t;
  }

  GradePtr fresh_meta(SourceSpan span) { return g_meta(next_meta_++, std::move(span)); }

  // --- grades ---------------------------------------------------------

  bool grade_start() const {
    switch (cur().kind) {
      case Tok::DotInt: case Tok::Int: case Tok::Underscore: return true;
      case Tok::Ident: return cur().text == "Lo" || cur().text == "Hi" || cur().text == "inf";
      case Tok::LParen: return true;  // may be a parenthesized grade; caller backtracks
      default: return false;
    }
  }

  GradePtr grade_atom() {
    SourceSpan sp = cur().span;
    switch (cur().kind) {
      case Tok::DotInt:
      case Tok::Int: {
        mpz_class n(cur().text);
        advance();
        return g_num(n);
      }
      case Tok::Underscore: advance(); return fresh_meta(sp);
      case Tok::Ident: {
        if (cur().text == "Lo" || cur().text == "Hi" || cur().text == "inf") {
          std::string name = cur().text;
          advance();
          return g_lit(name, sp);
        }
        fail("grade");
      }
      case Tok::LParen: {
        advance();
        GradePtr g = grade();
        expect(Tok::RParen, "')'");
        return g;
      }
      default: fail("grade");
    }
  }

  GradePtr grade_prod() {
    GradePtr g = grade_atom();
    while (at(Tok::Star)) {
      advance();
      g = g_mul(g, grade_atom());
    }
    return g;
  }

  GradePtr grade() {
    GradePtr g = grade_prod();
    while (at(Tok::Plus)) {
      advance();
      g = g_add(g, grade_prod());
    }
    return g;
  }

  // --- terms ----------------------------------------------------------

  TermPtr expr() {
    switch (cur().kind) {
      case Tok::Backslash: return lambda();
      case Tok::KwCase: return case_of();
      case Tok::KwLet: return let_box();
      default: return arrow();
    }
  }

  TermPtr lambda() {
    SourceSpan sp = cur().span;
    expect(Tok::Backslash, "'\\'");
    std::vector<Token> binders;
    binders.push_back(expect(Tok::Ident, "binder"));
    while (at(Tok::Ident)) { binders.push_back(cur()); advance(); }
    expect(Tok::Arrow, "'->'");
    TermPtr body = expr();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = t_lam(it->text, body, sp);
    return body;
  }

  TermPtr case_of() {
    SourceSpan sp = cur().span;
    expect(Tok::KwCase, "'case'");
    TermPtr scrut = app_expr();
    expect(Tok::KwOf, "'of'");
    if (at(Tok::LAngle)) {
      advance();
      Token x = expect(Tok::Ident, "binder");
      expect(Tok::Comma, "','");
      Token y = expect(Tok::Ident, "binder");
      expect(Tok::RAngle, "'>'");
      expect(Tok::Arrow, "'->'");
      TermPtr body = expr();
      return t_letpair(x.text, y.text, scrut, body, sp);
    }
    expect(Tok::LBracket, "'<' or '['");
    Token x = expect(Tok::Ident, "binder");
    expect(Tok::RBracket, "']'");
    expect(Tok::Arrow, "'->'");
    TermPtr body = expr();
    return t_letbox(x.text, scrut, body, sp);
  }

  TermPtr let_box() {
    SourceSpan sp = cur().span;
    expect(Tok::KwLet, "'let'");
    expect(Tok::LBracket, "'['");
    Token x = expect(Tok::Ident, "binder");
    expect(Tok::RBracket, "']'");
    expect(Tok::Equals, "'='");
    TermPtr scrut = expr_no_arrow();
    expect(Tok::KwIn, "'in'");
    TermPtr body = expr();
    return t_letbox(x.text, scrut, body, sp);
  }

  // Scrutinee position: application level (no trailing arrows).
  TermPtr expr_no_arrow() { return app_expr(); }

  bool at_binder_group() const {
    return at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon;
  }

  struct Binder {
    std::string name;
    std::vector<GradePtr> grades;  // 0, 1, or 2
    TermPtr type;
    SourceSpan span;
  };

  Binder binder() {
    SourceSpan sp = cur().span;
    expect(Tok::LParen, "'('");
    Token x = expect(Tok::Ident, "binder");
    expect(Tok::Colon, "':'");
    Binder b;
    b.name = x.text;
    b.span = sp;
    // Optional grade annotation: "(g1, g2)" or a single grade expression.
    if (at(Tok::LParen)) {
      size_t save = pos_;
      advance();
      try {
        GradePtr g1 = grade();
        if (at(Tok::Comma)) {
          advance();
          GradePtr g2 = grade();
          expect(Tok::RParen, "')'");
          b.grades = {g1, g2};
        } else {
          expect(Tok::RParen, "')'");
          b.grades = {g1};
        }
      } catch (const GertyError&) {
        pos_ = save;  // a parenthesized type, not a grade
      }
    } else if (grade_start()) {
      b.grades = {grade()};
    }
    b.type = expr();
    expect(Tok::RParen, "')'");
    return b;
  }

  TermPtr arrow() {
    if (at_binder_group()) {
      std::vector<Binder> group;
      group.push_back(binder());
      while (at_binder_group()) group.push_back(binder());
      if (at(Tok::Star)) {
        // Dependent tensor: a single binder with at most one grade.
        if (group.size() != 1 || group[0].grades.size() > 1)
          throw err(group[0].span, "tensor binders take a single grade");
        advance();
        TermPtr second = expr();
        GradePtr r = group[0].grades.empty() ? fresh_meta(group[0].span)
                                             : group[0].grades[0];
        return t_tensor(group[0].name, r, group[0].type, second, group[0].span);
      }
      expect(Tok::Arrow, "'->' or '*'");
      TermPtr codomain = expr();
      for (auto it = group.rbegin(); it != group.rend(); ++it) {
        GradePtr s, r;
        if (it->grades.size() == 2) {
          s = it->grades[0];
          r = it->grades[1];
        } else if (it->grades.empty()) {
          s = fresh_meta(it->span);
          r = fresh_meta(it->span);
        } else {
          throw err(it->span, "function binders take a grade pair (s, r)");
        }
        codomain = t_pi(it->name, s, r, it->type, codomain, it->span);
      }
      return codomain;
    }
    TermPtr head = app_expr();
    if (at(Tok::Arrow)) {
      SourceSpan sp = cur().span;
      advance();
      TermPtr codomain = expr();
      // Anonymous non-dependent arrow: implicit grades on a fresh binder.
      return t_pi(fresh_name("_x"), fresh_meta(sp), fresh_meta(sp), head, codomain, sp);
    }
    return head;
  }

  bool atom_start() const {
    switch (cur().kind) {
      case Tok::Ident: case Tok::KwType: case Tok::LParen: case Tok::LAngle:
      case Tok::LBracket:
        return true;
      default: return false;
    }
  }

  // A column-1 identifier followed by ':' or '=' opens the next
  // declaration; expressions must not swallow it as an argument.
  bool at_decl_boundary() const {
    return cur().kind == Tok::Ident && cur().span.col == 1 &&
           (peek(1).kind == Tok::Colon || peek(1).kind == Tok::Equals);
  }

  TermPtr app_expr() {
    TermPtr t = atom();
    while (atom_start() && !at_decl_boundary()) t = t_app(t, atom(), t->span);
    return t;
  }

  TermPtr atom() {
    SourceSpan sp = cur().span;
    switch (cur().kind) {
      case Tok::Ident: {
        std::string n = cur().text;
        advance();
        return t_var(n, sp);
      }
      case Tok::KwType: {
        advance();
        uint64_t l = 0;
        if (at(Tok::Int)) {
          l = std::stoull(cur().text);
          advance();
        }
        return t_universe(lvl_const(l), sp);
      }
      case Tok::LParen: {
        advance();
        TermPtr t = expr();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::LAngle: {
        advance();
        TermPtr first = expr_no_arrow();
        if (at(Tok::Comma)) {
          advance();
          TermPtr second = expr();
          expect(Tok::RAngle, "'>'");
          return t_pair(first, second, sp);
        }
        expect(Tok::Star, "',' or '*'");
        TermPtr second = expr_no_arrow();
        expect(Tok::RAngle, "'>'");
        // Non-dependent tensor sugar: fresh unused binder at grade 0.
        return t_tensor(fresh_name("_t"), g_zero(), first, second, sp);
      }
      case Tok::LBracket: {
        advance();
        size_t save = pos_;
        // Try a box type "[g] A"; fall back to box introduction "[t]".
        try {
          GradePtr g = grade();
          expect(Tok::RBracket, "']'");
          if (!atom_start()) fail("type");
          TermPtr ty = atom();
          return t_boxty(g, ty, sp);
        } catch (const GertyError&) {
          pos_ = save;
        }
        TermPtr t = expr();
        expect(Tok::RBracket, "']'");
        return t_boxintro(t, sp);
      }
      default: fail("term");
    }
  }
};

}  // namespace

ParsedFile parse_file(const std::string& text, const std::string& filename) {
  Parser p(lex(text, filename), filename);
  return p.file();
}

ParsedFile parse_file_at(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw GertyError(ErrorCode::ConfigError, "cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_file(ss.str(), path);
}

TermPtr parse_term(const std::string& text, const std::string& filename) {
  Parser p(lex(text, filename), filename);
  return p.single_term();
}

// ---------------------------------------------------------------------------
// Pretty-printer
// ---------------------------------------------------------------------------

namespace {

struct PrintEnv {
  bool grades = true;
  std::map<std::string, std::string> rename;  // $-names to display names
  std::set<std::string> taken;
};

void collect_names(const TermPtr& t, std::set<std::string>& dollar,
                   std::set<std::string>& plain) {
  auto note = [&](const std::string& n) {
    if (n.find('$') != std::string::npos) dollar.insert(n);
    else plain.insert(n);
  };
  if (!t) return;
  switch (t->kind) {
    case TermKind::Var: note(t->name); break;
    case TermKind::Pi:
    case TermKind::Tensor:
    case TermKind::Lam:
    case TermKind::LetBox: note(t->name); break;
    case TermKind::LetPair: note(t->name); note(t->name2); break;
    default: break;
  }
  collect_names(t->a, dollar, plain);
  collect_names(t->b, dollar, plain);
}

std::string display_grade_pair(const PrintEnv&, const GradePtr& s, const GradePtr& r) {
  return "(" + show_grade(s) + ", " + show_grade(r) + ")";
}

std::string disp(PrintEnv& env, const std::string& n) {
  auto it = env.rename.find(n);
  return it == env.rename.end() ? n : it->second;
}

// prec: 0 = expr, 1 = application argument (atom position)
std::string pp(PrintEnv& env, const TermPtr& t, int prec) {
  auto wrap = [&](const std::string& s, bool is_atom) {
    return (prec >= 1 && !is_atom) ? "(" + s + ")" : s;
  };
  switch (t->kind) {
    case TermKind::Var: return disp(env, t->name);
    case TermKind::Universe:
      return wrap("Type " + std::to_string(normalize_level(t->level)), false);
    case TermKind::Pi: {
      std::string head = "(" + disp(env, t->name) + " : ";
      if (env.grades) head += display_grade_pair(env, t->grade_s, t->grade_r) + " ";
      head += pp(env, t->a, 0) + ")";
      return wrap(head + " -> " + pp(env, t->b, 0), false);
    }
    case TermKind::Lam:
      return wrap("\\" + disp(env, t->name) + " -> " + pp(env, t->a, 0), false);
    case TermKind::App: {
      std::string fn = t->a->kind == TermKind::App || t->a->kind == TermKind::Var ||
                               t->a->kind == TermKind::BoxIntro ||
                               t->a->kind == TermKind::Pair
                           ? pp(env, t->a, 0)
                           : pp(env, t->a, 1);
      return wrap(fn + " " + pp(env, t->b, 1), false);
    }
    case TermKind::Tensor: {
      std::string head = "(" + disp(env, t->name) + " : ";
      if (env.grades) head += show_grade(t->grade_r) + " ";
      head += pp(env, t->a, 0) + ")";
      return wrap(head + " * " + pp(env, t->b, 0), false);
    }
    case TermKind::Pair:
      return "<" + pp(env, t->a, 0) + ", " + pp(env, t->b, 0) + ">";
    case TermKind::LetPair:
      return wrap("case " + pp(env, t->a, 0) + " of <" + disp(env, t->name) + ", " +
                      disp(env, t->name2) + "> -> " + pp(env, t->b, 0),
                  false);
    case TermKind::BoxTy: {
      std::string g = env.grades ? "[" + show_grade(t->grade_s) + "] " : "[] ";
      return wrap(g + pp(env, t->a, 1), false);
    }
    case TermKind::BoxIntro: return "[" + pp(env, t->a, 0) + "]";
    case TermKind::LetBox:
      return wrap("let [" + disp(env, t->name) + "] = " + pp(env, t->a, 0) + " in " +
                      pp(env, t->b, 0),
                  false);
  }
  return "?";
}

PrintEnv make_env(const TermPtr& t, bool grades) {
  PrintEnv env;
  env.grades = grades;
  std::set<std::string> dollar;
  collect_names(t, dollar, env.taken);
  for (const auto& n : dollar) {
    std::string stem = n.substr(0, n.find('$'));
    if (stem.empty()) stem = "x";
    std::string candidate = stem;
    int k = 2;
    while (env.taken.count(candidate)) candidate = stem + std::to_string(k++);
    env.taken.insert(candidate);
    env.rename[n] = candidate;
  }
  return env;
}

}  // namespace

std::string pretty(const TermPtr& t) {
  PrintEnv env = make_env(t, true);
  return pp(env, t, 0);
}

std::string pretty_ungraded(const TermPtr& t) {
  PrintEnv env = make_env(t, false);
  return pp(env, t, 0);
}

std::string pretty(const Declaration& d) {
  return d.name + " : " + pretty(d.signature) + "\n" + d.name + " = " +
         pretty(d.body) + "\n";
}

std::string pretty(const std::vector<Declaration>& decls) {
  std::string out;
  for (const auto& d : decls) out += pretty(d);
  return out;
}

}  // namespace gerty
