#pragma once

#include <stdexcept>
#include <string>

namespace wentzell {

/// Raised for malformed configuration input (unknown field kinds, bad
/// domain parameters, unparsable scenario files). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical operation cannot proceed (failed factorization,
/// degenerate element, inconsistent Laplacian datum). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wentzell
