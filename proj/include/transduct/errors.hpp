#pragma once

#include <stdexcept>
#include <string>

namespace transduct {

// Invalid arguments to a numeric routine (negative gamma argument, r > n, p outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The prior sample sits on the boundary r0 == 0 or r0 == n0, where the
// p^-1 (1-p)^-1 prior leaves the posterior improper.
class BoundaryPriorError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Observed data has zero likelihood under every model with nonzero prior.
class ImpossibleDataError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace transduct
