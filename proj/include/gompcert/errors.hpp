#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gompcert {

// Coarse error classes. The CLI maps them onto process exit codes.
enum class ErrorClass {
  kValidation = 1,
  kNumerical = 2,
  kGuard = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

// ---- validation --------------------------------------------------------

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorClass::kValidation, what) {}
};

class ZeroColumn : public Error {
 public:
  explicit ZeroColumn(std::size_t column);
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& detail);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error(ErrorClass::kValidation, what) {}
};

class EmptyCandidateSet : public Error {
 public:
  explicit EmptyCandidateSet(const std::string& what)
      : Error(ErrorClass::kValidation, what) {}
};

class BoundViolated : public Error {
 public:
  BoundViolated(double delta, double bound);
};

class HypothesisViolated : public Error {
 public:
  explicit HypothesisViolated(const std::string& what)
      : Error(ErrorClass::kValidation, what) {}
};

// Rejected experiment spec; names the offending field.
class SpecError : public Error {
 public:
  SpecError(const std::string& field, const std::string& detail);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// ---- numerical ---------------------------------------------------------

class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& what)
      : Error(ErrorClass::kNumerical, what) {}
};

class NotSymmetric : public Error {
 public:
  explicit NotSymmetric(double asymmetry);
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(int sweeps);
};

// A built-in self-check (e.g. a closed-form spectrum) did not hold.
class VerificationFailed : public Error {
 public:
  explicit VerificationFailed(const std::string& what)
      : Error(ErrorClass::kNumerical, what) {}
};

// ---- guards ------------------------------------------------------------

class GuardExceeded : public Error {
 public:
  explicit GuardExceeded(const std::string& what) : Error(ErrorClass::kGuard, what) {}
};

class TooManySubsets : public Error {
 public:
  TooManySubsets(std::size_t n, std::size_t order, double limit);
};

}  // namespace gompcert
