#pragma once

#include <stdexcept>
#include <string>

namespace twist {

// Malformed or invalid input. CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A condition guaranteed by construction failed. CLI exit code 3.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_invariant(const std::string& what);

inline void check_invariant(bool cond, const char* what) {
  if (!cond) fail_invariant(what);
}

}  // namespace twist
