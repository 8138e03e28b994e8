#pragma once

#include <stdexcept>
#include <string>

namespace plumetrack {

// Raised when an input violates a documented invariant (negative
// concentration, non-positive cell size, malformed configuration, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A world position fell outside the workspace rectangle.
class OutOfBoundsError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// The requested time step would make the explicit transport scheme unstable.
class StabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A likelihood annihilated the prior: sum_j prior_j * like_j == 0.
class DegenerateUpdateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration problem carrying the offending field path (e.g. "source.position").
class ConfigError : public ValidationError {
public:
    ConfigError(std::string field, const std::string& what)
        : ValidationError(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace plumetrack
