#pragma once

#include <stdexcept>
#include <string>

namespace memnoise {

/// Invalid global run parameters (band, sample count, burn-in, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument to an individual operation.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// A caller broke an operation contract (e.g. injected noise into a
/// noise-free element).
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// A memristor model failed the nonnegativity condition. Carries a charge
/// value at which the memristance is negative.
class InadmissibleModelError : public ArgumentError {
public:
    InadmissibleModelError(const std::string& what, double witness_q)
        : ArgumentError(what), witness_q(witness_q) {}
    double witness_q;
};

}  // namespace memnoise
