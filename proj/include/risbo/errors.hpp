#ifndef RISBO_ERRORS_HPP
#define RISBO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace risbo {

/// Bad scalar argument (negative variance, non-finite value, b <= 0, ...).
class InvalidParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Matrix/vector dimensions do not line up.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation called on an object in the wrong state (e.g. untrained receiver).
class InvalidStateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Non-finite or otherwise unusable numeric input.
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cholesky factorization hit a non-positive pivot.
class DecompositionError : public std::runtime_error {
public:
    DecompositionError(const std::string& message, std::ptrdiff_t pivot_index)
        : std::runtime_error(message), pivot_(pivot_index) {}
    std::ptrdiff_t pivot() const { return pivot_; }

private:
    std::ptrdiff_t pivot_;
};

/// GP fit could not factorize the kernel matrix even after jitter escalation.
class FitFailureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Acquisition search could not produce an unobserved configuration.
class ExhaustionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration parse/validation failure; carries the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field_path, const std::string& message)
        : std::runtime_error(field_path + ": " + message), field_path_(std::move(field_path)) {}
    const std::string& field_path() const { return field_path_; }

private:
    std::string field_path_;
};

}  // namespace risbo

#endif
