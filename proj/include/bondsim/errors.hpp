#pragma once

#include <stdexcept>
#include <string>

namespace bondsim {

// Bad user-supplied configuration (unknown names, out-of-range counts, bad files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bondsim
