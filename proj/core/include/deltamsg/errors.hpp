#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deltamsg {

// Root of every exception thrown by the library. Callers that only care
// about "something in deltamsg failed" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- cpg -----------------------------------------------------------------

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::string token, const std::string& what)
      : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
              " near '" + token + "': " + what),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  int line_;
  int column_;
  std::string token_;
};

class EmptyUnit : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(std::string field_path, const std::string& what)
      : Error(field_path.empty() ? what : field_path + ": " + what),
        field_path_(std::move(field_path)) {}

  const std::string& field_path() const noexcept { return field_path_; }

 private:
  std::string field_path_;
};

class IntegrityError : public Error {
 public:
  using Error::Error;
};

// ---- corpus --------------------------------------------------------------

class InvalidRatio : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

// ---- generation backends -------------------------------------------------

// Base for failures of one LLM request. index() is the candidate index the
// request was issued for.
class RequestError : public Error {
 public:
  RequestError(std::size_t index, const std::string& what)
      : Error("request " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class TransportError : public RequestError {
 public:
  using RequestError::RequestError;
};

class AuthError : public RequestError {
 public:
  using RequestError::RequestError;
};

class MalformedResponse : public RequestError {
 public:
  using RequestError::RequestError;
};

// ---- qa ------------------------------------------------------------------

class EmptyGraph : public Error {
 public:
  using Error::Error;
};

class DegenerateLabels : public Error {
 public:
  using Error::Error;
};

class EmptyInputs : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// ---- metrics -------------------------------------------------------------

class EmptyReference : public Error {
 public:
  using Error::Error;
};

// ---- pipeline / cli ------------------------------------------------------

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NotARepo : public Error {
 public:
  using Error::Error;
};

class GitCommandFailed : public Error {
 public:
  GitCommandFailed(const std::string& command, int status, std::string stderr_text)
      : Error("git command failed (" + std::to_string(status) + "): " + command +
              (stderr_text.empty() ? std::string() : "\n" + stderr_text)),
        stderr_(std::move(stderr_text)) {}

  const std::string& stderr_text() const noexcept { return stderr_; }

 private:
  std::string stderr_;
};

}  // namespace deltamsg
