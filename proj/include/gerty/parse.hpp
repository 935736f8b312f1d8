#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gerty/term.hpp"

namespace gerty {

// A surface declaration: a `name : type` line paired with a `name = term`
// line, parsed under the same file-level semiring.
struct Declaration {
  std::string name;
  TermPtr signature;
  TermPtr body;
  SourceSpan span;
};

struct ParsedFile {
  std::vector<Declaration> decls;
  std::optional<std::string> semiring;  // %semiring pragma, if any
  int next_meta = 1;                    // first metavariable id not minted here
};

// Parses Gerty surface text. Grades omitted from binders elaborate to
// fresh metavariables; `<A * B>` elaborates to a 0-graded tensor over a
// fresh unused binder. Throws ParseError with the offending span and the
// expected-token set.
ParsedFile parse_file(const std::string& text, const std::string& filename = "<input>");
ParsedFile parse_file_at(const std::string& path);

// Parses a single term (testing convenience; same grammar as bodies).
TermPtr parse_term(const std::string& text, const std::string& filename = "<term>");

// Canonical pretty-printer; parse(pretty(d)) is alpha-equal to d with
// identical grades. Internal fresh names ($-suffixed) are renamed to
// clash-free source-legal names.
std::string pretty(const TermPtr& t);
std::string pretty(const Declaration& d);
std::string pretty(const std::vector<Declaration>& decls);

// Pretty-printing with grade annotations erased (the singleton-semiring
// view, where all grades coincide and may be omitted).
std::string pretty_ungraded(const TermPtr& t);

}  // namespace gerty
