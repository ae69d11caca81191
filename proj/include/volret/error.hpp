#pragma once

#include <stdexcept>
#include <string>

namespace volret {

// Exit codes used by the command-line tool. Library errors map onto them.
enum class ExitCode : int { ok = 0, usage = 1, io = 2, validation = 3, numerical = 4 };

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::validation; }
};

class IoError : public Error {
public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::io; }
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class StabilityError : public Error {
public:
  using Error::Error;
};

class MomentDoesNotExist : public Error {
public:
  using Error::Error;
};

// Degenerate input to an estimator (zero variance, too few points).
class FitError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  NumericalError(const std::string& what, double achieved = 0.0)
      : Error(what), achieved_(achieved) {}
  ExitCode exit_code() const noexcept override { return ExitCode::numerical; }
  double achieved_tolerance() const noexcept { return achieved_; }

private:
  double achieved_;
};

}  // namespace volret
