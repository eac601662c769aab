#pragma once

#include <stdexcept>
#include <string>

namespace bomtsp {

// Bad file contents, unknown formats, unsupported keywords.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// LP did not converge, iteration limits hit, tolerances blown.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// An internal postcondition failed (e.g. a decomposition identity).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace bomtsp
