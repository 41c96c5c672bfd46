#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gradua {

// Base of every error raised by the engine. `kind()` is the stable tag used in
// machine-readable reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

#define GRADUA_DEFINE_ERROR(Name, tag)                     \
  class Name : public Error {                              \
   public:                                                 \
    using Error::Error;                                    \
    const char* kind() const noexcept override { return tag; } \
  };

// Precondition violated by the caller (mismatched charts, unknown variable, ...).
GRADUA_DEFINE_ERROR(DomainError, "domain-error")
// Two independent computations of the same quantity disagreed.
GRADUA_DEFINE_ERROR(EngineDefectError, "engine-defect")
GRADUA_DEFINE_ERROR(NotInvertibleError, "not-invertible")
GRADUA_DEFINE_ERROR(UnsupportedError, "unsupported")
GRADUA_DEFINE_ERROR(InconsistentActionError, "inconsistent-action")
GRADUA_DEFINE_ERROR(NotGradedActionError, "not-a-graded-action")
GRADUA_DEFINE_ERROR(DegenerateActionError, "degenerate-action")
GRADUA_DEFINE_ERROR(NotDoubleStructureError, "not-a-double-structure")

#undef GRADUA_DEFINE_ERROR

// Malformed or ill-typed DSL input, located by 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}
  const char* kind() const noexcept override { return "parse-error"; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace gradua
