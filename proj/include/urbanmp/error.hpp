#pragma once

#include <stdexcept>
#include <string>

namespace urbanmp {

/// Invalid or non-finite input parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Degenerate geometry such as a zero-length line of sight.
class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Statistical fit that cannot be performed on the given data.
class FitError : public std::runtime_error {
public:
    enum class Kind { insufficient_data, degenerate_distribution, singular };

    FitError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

} // namespace urbanmp
