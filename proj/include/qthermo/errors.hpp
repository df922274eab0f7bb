#pragma once

#include <stdexcept>
#include <string>

namespace qthermo {

// Argument outside the mathematical domain of an operation (bad index, beta <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input violates a stated precondition (non-Hermitian matrix, incomplete Kraus set, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Superposition whose normalization constant vanishes.
class DegenerateStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric pipeline produced a non-finite or otherwise unusable value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid scan/scaling configuration. Carries the offending field name.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace qthermo
