#pragma once

#include <stdexcept>
#include <string>

namespace primpair {

/// Input outside an operation's mathematical domain (m = 0, inv(0), l not dividing q^n-1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configured work budget ran out before an exact answer was reached.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size limit (enumeration bound, tiny-field cap, subset bits) would be exceeded.
class BoundsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace primpair
