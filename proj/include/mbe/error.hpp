#pragma once

#include <stdexcept>
#include <string>

namespace mbe {

// Raised for anything wrong with input data: malformed files, invariant
// violations, degenerate inputs. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mbe
