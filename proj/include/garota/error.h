#pragma once

#include <stdexcept>
#include <string>

namespace garota {

// Base class for every error raised by the library. Each module derives a
// narrow type so callers (and the CLI exit-code mapping) can tell them apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace garota
