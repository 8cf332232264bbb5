#pragma once

#include <stdexcept>
#include <string>

namespace arbor {

// Malformed caller input: unknown ids, broken invariants, missing fields.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Instance too large for an exact enumerator's configured limit.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Internal bug trap: a state the underlying theorems rule out.
struct ContractError : std::logic_error {
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace arbor
