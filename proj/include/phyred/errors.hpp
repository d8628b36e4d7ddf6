#pragma once

#include <stdexcept>

namespace phyred {

/// Raised when an exhaustive operation is asked to go past a configured size limit.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace phyred
