#pragma once

#include <stdexcept>
#include <string>

namespace qkick {

// A violated precondition or numerical contract (bad sizes, non-finite
// amplitudes, coefficient norms outside tolerance).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The exact simulator was asked for more sites than its configured cap.
class ResourceCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace qkick
