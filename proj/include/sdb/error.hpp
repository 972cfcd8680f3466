#pragma once

#include <stdexcept>
#include <string>

namespace sdb {

/// Error codes for model-level validation failures. Each corresponds to a
/// specific way a caller-supplied object can be malformed.
enum class Errc {
  missing_singleton,
  not_downward_closed,
  unknown_vertex,
  index_out_of_range,
  non_composable,
  bad_row_shape,
  closure_violation,
  unknown_face,
  not_relational,
  not_display,
  base_mismatch,
  kind_mismatch,
  component_type_mismatch,
  missing_component,
  equation_premise_violated,
  equation_context_mismatch,
  path_not_into_base,
  unbound_name,
  context_mismatch,
  exhausted,
};

const char* errc_name(Errc c);

/// Thrown when an input fails validation against the model's invariants.
class ModelError : public std::runtime_error {
 public:
  ModelError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

/// Thrown when an internal invariant is breached. Never expected; indicates a
/// bug in this library, not in its input. The CLI maps it to exit code 3.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error("internal: " + what) {}
};

inline void internal_check(bool ok, const std::string& what) {
  if (!ok) throw InternalError(what);
}

/// Positioned parse failure; the CLI maps it to exit code 2.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, int column, const std::string& expected)
      : std::runtime_error("syntax error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": expected " + expected),
        line_(line),
        column_(column),
        expected_(expected) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::string expected_;
};

}  // namespace sdb
