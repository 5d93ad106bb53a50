#pragma once

#include <stdexcept>
#include <string>

namespace hypcap {

// Input outside the mathematical domain of an operation (|z| >= 1, negative radius, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Solver or experiment configuration that cannot be honoured (odd n, alpha outside the domain, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Disks touch or overlap, or a configuration leaves the unit disk.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace hypcap
