#pragma once

#include <stdexcept>
#include <string>

namespace tsetlin {

/// Bad configuration: invalid hyperparameter, malformed config file, bad RNG
/// spec. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad or unreadable input data (CSV, IDX, model files). CLI exit code 3.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal contract was violated (e.g. an NA feedback cell was queried).
/// Reaching this indicates a bug in the caller, not bad user input.
/// CLI exit code 4.
class ContractViolation : public std::logic_error {
public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

} // namespace tsetlin
