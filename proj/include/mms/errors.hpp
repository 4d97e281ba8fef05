#pragma once
// Error types with CLI exit-code significance: budget exhaustion is
// distinguished from ordinary invalid input.

#include <stdexcept>

namespace mms {

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mms
