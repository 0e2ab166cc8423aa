#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zsa {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition (other than a pure domain restriction) failed.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No sign change could be found on a root bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The modulus on a contour dropped below the boundary guard; the caller
/// should perturb the contour.
class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bounded search (extremes, translation numbers, scans) found nothing.
class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A residual re-check failed after a transformation of zeros.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UnresolvedBox {
  double x_min, x_max, y_min, y_max;
  int winding;
};

/// Zero enumeration hit its subdivision budget.
class IncompleteEnumeration : public std::runtime_error {
 public:
  IncompleteEnumeration(const std::string& what, std::vector<UnresolvedBox> boxes)
      : std::runtime_error(what), boxes_(std::move(boxes)) {}
  const std::vector<UnresolvedBox>& boxes() const noexcept { return boxes_; }

 private:
  std::vector<UnresolvedBox> boxes_;
};

}  // namespace zsa
