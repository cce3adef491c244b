#pragma once

#include <stdexcept>
#include <string>

namespace qtilt {

// Problems caused by user-supplied input; the CLI maps these to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal invariants (bugs); the CLI maps these to exit code 2.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

inline void internal_check(bool cond, const std::string& msg) {
  if (!cond) throw InternalError(msg);
}

}  // namespace qtilt
