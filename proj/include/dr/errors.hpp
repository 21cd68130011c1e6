#pragma once
#include <stdexcept>
#include <string>

namespace dr {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct UnsupportedDimension : Error {
    using Error::Error;
};
struct InvalidGenerators : Error {
    using Error::Error;
};
struct NotApplicable : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct PoleAtTheta : Error {
    using Error::Error;
};
struct DegenerateRange : Error {
    using Error::Error;
};
struct OutsideBall : Error {
    using Error::Error;
};
struct InvalidFreeParameters : Error {
    using Error::Error;
};
struct NoMinimum : Error {
    using Error::Error;
};
struct ConvergenceFailure : Error {
    using Error::Error;
};
struct SubspaceViolation : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

} // namespace dr
