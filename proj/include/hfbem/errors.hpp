#pragma once

#include <stdexcept>
#include <string>

namespace hfbem {

// Raised when a computation fails numerically (divergent recurrence, solver
// breakdown, ambiguous root configuration).  The CLI maps this to exit
// code 3, as opposed to std::invalid_argument (bad config, exit code 2).
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string &what) : std::runtime_error(what) {}
};

} // namespace hfbem
