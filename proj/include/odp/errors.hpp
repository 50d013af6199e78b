#pragma once

#include <stdexcept>
#include <string>

namespace odp {

/// Invalid parameters or configuration. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A solve failed (Newton divergence, eigensolver breakdown, missing
/// bracket, ...). CLI maps this to exit code 1.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Newton converged to the zero solution. Distinct from divergence so
/// callers can retry with a larger initial amplitude.
class TrivialBranchError : public SolverError {
public:
    explicit TrivialBranchError(const std::string& msg) : SolverError(msg) {}
};

} // namespace odp
