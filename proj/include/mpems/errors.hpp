#pragma once

#include <stdexcept>
#include <string>

namespace mpems {

// Bad inputs, configs or data files; the caller can fix these.
// Anything else escaping a module is an internal failure.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

} // namespace mpems
