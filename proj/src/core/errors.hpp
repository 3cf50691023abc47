#pragma once
// Exception types shared across the solver core.

#include <stdexcept>

namespace boxatom {

// A quantity the code itself guarantees (symmetry, normalization, bookkeeping)
// failed its check: indicates a bug, not bad user input.
struct InternalConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

// An iterative procedure exhausted its budget without meeting its thresholds.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace boxatom
