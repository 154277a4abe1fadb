#pragma once

#include <stdexcept>
#include <string>

namespace noncoh {

enum class ErrorKind { usage, spec, domain, capacity, resolution, numeric };

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error the library throws. `kind()` drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

/// Invalid channel law or parameter outside its documented range.
class SpecError : public Error {
 public:
  explicit SpecError(const std::string& what) : Error(ErrorKind::spec, what) {}
};

/// Valid inputs that lie outside the domain of a particular formula.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

/// Problem size exceeds what an exact evaluator supports.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(ErrorKind::capacity, what) {}
};

/// Grid too coarse for the requested transform.
class ResolutionError : public Error {
 public:
  explicit ResolutionError(const std::string& what) : Error(ErrorKind::resolution, what) {}
};

/// Iteration cap hit or a non-finite intermediate. Carries the best value seen.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double best = 0.0)
      : Error(ErrorKind::numeric, what), best_(best) {}
  double best_value() const noexcept { return best_; }

 private:
  double best_;
};

}  // namespace noncoh
