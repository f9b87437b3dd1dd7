#pragma once

#include <stdexcept>
#include <string>

namespace llspec {

// Invalid user input (bad grid, unknown kind, bad window, ...). CLI exit code 2.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdown (singular landscape system, QL non-convergence). CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// No eigenstate in the requested energy window.
class EmptyWindowError : public NumericalError {
public:
    explicit EmptyWindowError(const std::string& what) : NumericalError(what) {}
};

}  // namespace llspec
