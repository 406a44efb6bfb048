#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace akita {

/// A vCPU specification violates its static contract. `field()` names the
/// offending field ("c_opt", "c_pes", "period", ...).
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The LO-criticality utilization alone saturates a core, so no scaling
/// factor exists.
class InfeasibleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller broke an operation precondition (duplicate enqueue, demand check
/// on a LO vCPU, overrunning a granted slice, ...). Always a simulator bug.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Scenario or spec file could not be turned into a valid model.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    /// 1-based line number in the source file; 0 when unknown.
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace akita
