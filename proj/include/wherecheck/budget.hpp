#pragma once

#include <stdexcept>

namespace wherecheck {

// Raised when an enumeration or a decision-diagram node table outgrows its
// configured limit; callers report the result as inconclusive.
class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace wherecheck
