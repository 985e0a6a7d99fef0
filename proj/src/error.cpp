#include "ym/error.hpp"

#include <sstream>

namespace ym {

namespace {

std::string describe_parse(const std::string& message, std::size_t offset,
                           const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << message << " at offset " << offset;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) os << ", ";
      os << expected[i];
    }
    os << ")";
  }
  return os.str();
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset,
                       std::vector<std::string> expected)
    : Error(describe_parse(message, offset, expected)),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifierError::UnknownIdentifierError(const std::string& name,
                                               std::size_t offset)
    : ParseError("unknown identifier '" + name + "'", offset), name_(name) {}

DomainError::DomainError(const std::string& message, std::string subtree)
    : Error(message + " in '" + subtree + "'"), subtree_(std::move(subtree)) {}

const char* to_string(ValidationIssue issue) {
  switch (issue) {
    case ValidationIssue::bad_interval: return "bad interval";
    case ValidationIssue::empty: return "empty";
    case ValidationIssue::outside_omega: return "outside omega";
    case ValidationIssue::overlap: return "overlap";
    case ValidationIssue::gap: return "gap";
    case ValidationIssue::monotonicity: return "monotonicity";
    case ValidationIssue::unbounded: return "unbounded value";
    case ValidationIssue::precondition: return "precondition";
  }
  return "unknown";
}

ValidationError::ValidationError(ValidationIssue issue, const std::string& message)
    : Error(std::string(to_string(issue)) + ": " + message), issue_(issue) {}

SingularityError::SingularityError(double y, double x, double derivative)
    : Error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "density singular at y = " << y << " (preimage x = " << x
           << ", |u'| = " << derivative << ")";
        return os.str();
      }()),
      y_(y),
      x_(x),
      derivative_(derivative) {}

}  // namespace ym
