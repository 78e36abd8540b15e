#pragma once

#include <stdexcept>
#include <string>

namespace irs {

// Precondition violations on solver / model inputs.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Weight matrix and lattice disagree on element count.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Refusal to run an enumeration or sweep whose cost exceeds a configured cap.
class CostCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric quantity could not be resolved on the sampled grid
// (e.g. the 3-dB contour is not bracketed).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnresolvedWidthError : public NumericError {
public:
    using NumericError::NumericError;
};

// Bad scenario configuration; `field` names the offending key or flag.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace irs
