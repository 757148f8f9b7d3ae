#pragma once

#include <stdexcept>
#include <string>

namespace connectgraph {

/// Thrown when inputs violate a documented precondition or type invariant.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a numerical routine cannot deliver its postcondition
/// (non-convergence, singular systems, degenerate spectra that were requested
/// to be strict).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ValidationError(message);
}

}  // namespace connectgraph
