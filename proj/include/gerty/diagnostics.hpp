#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gerty {

struct SourceSpan {
  std::string file;
  int line = 0;       // 1-based; 0 = unknown
  int col = 0;        // 1-based
  int end_line = 0;
  int end_col = 0;

  bool known() const { return line > 0; }
  std::string str() const {
    if (!known()) return file.empty() ? "<unknown>" : file;
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
  }
};

enum class ErrorCode {
  ParseError,
  UnboundVariable,
  UnresolvedMetaVar,
  ForeignLiteral,
  NotAType,
  NonZeroTypeUse,
  NotAFunction,
  NotATensor,
  NotABox,
  CannotInfer,
  GradeMismatch,
  TypeMismatch,
  FuelExhausted,
  MalformedExchange,
  PreconditionViolated,
  NotQuantitative,
  OutOfFragment,
  SimulationMismatch,
  Unsatisfiable,
  SolverUnavailable,
  SolverUnknown,
  ConfigError,
};

const char* error_code_name(ErrorCode c);

// Thrown by the library for any user-facing failure; carries the span of
// the offending construct when one is known.
class GertyError : public std::runtime_error {
public:
  GertyError(ErrorCode code, std::string message, SourceSpan span = {})
      : std::runtime_error(std::move(message)), code(code), span(std::move(span)) {}

  ErrorCode code;
  SourceSpan span;

  std::string render() const {
    std::string out;
    if (span.known()) out += span.str() + ": ";
    out += what();
    return out;
  }
};

}  // namespace gerty
