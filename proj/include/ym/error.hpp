#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ym {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: expression source or JSON document.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::vector<std::string> expected = {});

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// An identifier that is neither the variable, `pi`, nor a known function.
class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset);

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Evaluation left the domain of an operation (ln of a nonpositive value,
/// division by zero, ...). `subtree()` is the rendering of the failing node.
class DomainError : public Error {
 public:
  DomainError(const std::string& message, std::string subtree);

  const std::string& subtree() const noexcept { return subtree_; }

 private:
  std::string subtree_;
};

enum class ValidationIssue {
  bad_interval,
  empty,
  outside_omega,
  overlap,
  gap,
  monotonicity,
  unbounded,
  precondition,
};

const char* to_string(ValidationIssue issue);

/// A piecewise function or builder input that breaks a structural invariant.
class ValidationError : public Error {
 public:
  ValidationError(ValidationIssue issue, const std::string& message);

  ValidationIssue issue() const noexcept { return issue_; }

 private:
  ValidationIssue issue_;
};

/// The inverse-function derivative blows up: |u'| at the preimage is below
/// the floor, so the density is not representable at this point.
class SingularityError : public Error {
 public:
  SingularityError(double y, double x, double derivative);

  double y() const noexcept { return y_; }
  double x() const noexcept { return x_; }
  double derivative() const noexcept { return derivative_; }

 private:
  double y_;
  double x_;
  double derivative_;
};

/// Point outside Ω for eval, or value outside a piece image for invert.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace ym
