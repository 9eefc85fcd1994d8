#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plcprep {

/// Failure classes. The CLI maps each one to its own exit code.
enum class ErrorKind {
  invalid_argument,
  parse,
  degenerate,      // data that cannot be analysed (constant columns, nothing left)
  no_periodicity,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// CSV ingestion failure. `row` is the 1-based data row (0 for the header),
/// `column` the 0-based column index or npos when the whole row is at fault.
class ParseError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ParseError(const std::string& what, std::size_t row, std::size_t column = npos)
      : Error(ErrorKind::parse, what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// A pipeline stage failed; keeps the original kind, prefixes the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace plcprep
