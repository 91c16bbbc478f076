#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sortcell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Robot program text that does not match the supported dialect.
class ParseError : public Error {
 public:
  ParseError(std::size_t line_no, std::string reason)
      : Error("line " + std::to_string(line_no) + ": " + reason),
        line_no_(line_no),
        reason_(std::move(reason)) {}

  std::size_t line_no() const noexcept { return line_no_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_no_;
  std::string reason_;
};

/// Structured documents (scenario, ladder IR, trace) that fail to decode.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ScenarioInvalid : public Error {
 public:
  using Error::Error;
};

class DeadlockDetected : public Error {
 public:
  using Error::Error;
};

/// Raised by the robot interpreter while executing a statement.
class RuntimeFault : public Error {
 public:
  RuntimeFault(std::string statement, std::string cause)
      : Error("runtime fault at '" + statement + "': " + cause),
        statement_(std::move(statement)),
        cause_(std::move(cause)) {}

  const std::string& statement() const noexcept { return statement_; }
  const std::string& cause() const noexcept { return cause_; }

 private:
  std::string statement_;
  std::string cause_;
};

/// A frame was requested while the filter wheel was still travelling.
class CameraObstructed : public Error {
 public:
  using Error::Error;
};

class AmbiguousScene : public Error {
 public:
  using Error::Error;
};

class UnknownAlias : public Error {
 public:
  using Error::Error;
};

class BusFault : public Error {
 public:
  using Error::Error;
};

class HeaderMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed or unknown operator command submitted to the service.
class CommandError : public Error {
 public:
  CommandError(std::string code, const std::string& message)
      : Error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace sortcell
