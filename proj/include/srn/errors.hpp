#pragma once

#include <stdexcept>
#include <string>

namespace srn {

// Base class for all library failures.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config / schema problems (bad keys, missing fields, invalid values).
struct config_error : error {
  using error::error;
};

// Numeric failures: solver step collapse, runaway SSA, integrity violations.
struct numeric_error : error {
  using error::error;
};

// A control vector that leaves the admissible set (delta = 0 while a > 0,
// or delta > 0 while a = 0).
struct inadmissible_control : error {
  using error::error;
};

}  // namespace srn
