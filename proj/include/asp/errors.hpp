#pragma once

#include <stdexcept>
#include <string>

namespace asp {

// Bad configuration or dimension mismatch detected before/while wiring a run.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dataset files that fail to load or validate.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite state encountered mid-simulation; the run must abort.
struct NumericalFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace asp
