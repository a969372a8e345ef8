#pragma once

#include <stdexcept>
#include <string>

namespace hyplab {

/// Broad classes of failure. The command-line front end maps these onto
/// process exit codes.
enum class ErrorKind {
  precondition,  // an operation's stated hypothesis does not hold
  domain,        // a formula is evaluated outside its domain (e.g. x <= e^e)
  invalid_spec,  // malformed arithmetic-function specification
  overflow,      // exact integer arithmetic would wrap
  resource,      // a configured work or memory cap was hit
  io,            // cache / file problems
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::precondition, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::domain, what) {}
};

class InvalidSpecError : public Error {
 public:
  explicit InvalidSpecError(const std::string& what)
      : Error(ErrorKind::invalid_spec, what) {}
};

class ArithmeticOverflow : public Error {
 public:
  explicit ArithmeticOverflow(const std::string& what)
      : Error(ErrorKind::overflow, what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what)
      : Error(ErrorKind::resource, what) {}
};

}  // namespace hyplab
