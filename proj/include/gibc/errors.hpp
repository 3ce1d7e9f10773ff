#pragma once

#include <stdexcept>
#include <string>

namespace gibc {

// Invalid argument or precondition violation (bad radii, Re s <= 0, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Request would exceed a memory or size cap.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown (defective eigenbasis, singular factorization, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solve did not reach the requested tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double achieved_residual, int iterations)
        : std::runtime_error(what),
          achieved_residual(achieved_residual),
          iterations(iterations) {}

    double achieved_residual;
    int iterations;
};

} // namespace gibc
