#pragma once

#include <stdexcept>
#include <string>

namespace totlab {

// Every failure raised by the library carries one of these kinds. The CLI
// maps kinds onto exit codes (see cli.hpp), so the list must stay closed.
enum class ErrorKind {
  kDomain,        // argument outside an operation's precondition
  kFormat,        // unparsable input file
  kValidation,    // parsed input violating an invariant
  kPole,          // evaluation exactly at s = 1
  kDegenerateZero,  // |zeta'(rho)| too small, simple-zero hypothesis fails
  kResource,      // size or budget cap exceeded
  kInternal,      // overflow or failed self-consistency check
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::kDomain, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::kFormat, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

class PoleError : public Error {
 public:
  explicit PoleError(const std::string& what) : Error(ErrorKind::kPole, what) {}
};

class DegenerateZeroError : public Error {
 public:
  explicit DegenerateZeroError(const std::string& what)
      : Error(ErrorKind::kDegenerateZero, what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what)
      : Error(ErrorKind::kResource, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error(ErrorKind::kInternal, what) {}
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace totlab
