#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypercqed {

enum class ErrorKind {
  domain,
  invalid_spec,
  resource,
  numeric,
  contract,
  bracketing,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every exception thrown by the library. `kind()` is stable and is
/// what the CLI reports in its machine-readable error document.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error(ErrorKind::domain, m) {}
};

class InvalidSpecError : public Error {
 public:
  explicit InvalidSpecError(const std::string& m)
      : Error(ErrorKind::invalid_spec, m) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& m) : Error(ErrorKind::resource, m) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m) : Error(ErrorKind::numeric, m) {}
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& m) : Error(ErrorKind::contract, m) {}
};

class BracketingError : public Error {
 public:
  explicit BracketingError(const std::string& m)
      : Error(ErrorKind::bracketing, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};

}  // namespace hypercqed
