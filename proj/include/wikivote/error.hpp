#pragma once

#include <stdexcept>
#include <string>

namespace wikivote {

// Root of every error the library raises. The CLI maps subclasses onto
// exit codes: ArgumentError -> 2, DataError -> 3, NetworkError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed a value outside an operation's domain (empty range, df < 1).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input data violates a schema or an invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed input at a known line of a text file.
class ParseError : public DataError {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// Design matrix lost full column rank at `column`.
class SingularMatrixError : public DataError {
 public:
  explicit SingularMatrixError(std::string column)
      : DataError("design matrix is rank deficient at column '" + column + "'"),
        column_(std::move(column)) {}

  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

// The upstream page-view service does not know the article.
class MissingPageError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

}  // namespace wikivote
