#pragma once

#include <stdexcept>
#include <string>

namespace pmblue {

// Bad input: unknown family, shape parameter out of range, size mismatch.
// param() names the offending parameter so front-ends can report it.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string param, const std::string& message)
        : std::invalid_argument(message), param_(std::move(param)) {}

    const std::string& param() const noexcept { return param_; }

private:
    std::string param_;
};

// Quadrature budget exhausted, singular system, divergent series.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pmblue
