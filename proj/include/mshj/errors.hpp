#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mshj {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Input / configuration errors (CLI exit code 2)
// ---------------------------------------------------------------------------

class InputError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& detail);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownFunction : public InputError {
 public:
  UnknownFunction(std::string name, std::size_t offset);
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

class UnboundVariable : public InputError {
 public:
  explicit UnboundVariable(std::string name);
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

class UnknownModel : public InputError {
 public:
  using InputError::InputError;
};

class InvalidParams : public InputError {
 public:
  using InputError::InputError;
};

class CapExceeded : public InputError {
 public:
  CapExceeded(std::size_t requested, std::size_t cap);
};

// ---------------------------------------------------------------------------
// Numerical failures (CLI exit code 3)
// ---------------------------------------------------------------------------

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Raised when a function is evaluated outside its domain; carries the
/// printed form of the offending subexpression when one is known.
class DomainError : public NumericalError {
 public:
  DomainError(const std::string& what, std::string subexpression = {});
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularJacobian : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OutOfDomain : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BlowUp : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateJacobian : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CoverageMiss : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A point error raised inside a grid sweep, with the grid location attached.
class PointFailure : public NumericalError {
 public:
  PointFailure(std::vector<double> point, const std::string& cause, bool input_error);
  const std::vector<double>& point() const noexcept { return point_; }
  bool input_error() const noexcept { return input_error_; }

 private:
  std::vector<double> point_;
  bool input_error_;
};

}  // namespace mshj
