#pragma once

#include <stdexcept>
#include <string>

namespace rou {

/// A violated modelling assumption or precondition (CLI exit code 2).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Quadrature, shooting or root bracketing failed to meet its tolerance (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rou
