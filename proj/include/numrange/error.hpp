#pragma once

#include <stdexcept>
#include <string>

namespace numrange {

enum class ErrorKind {
    NotHermitian,
    NoConvergence,
    ZeroVector,
    BadParameter,
    DegenerateCone,
    InsufficientSamples,
    Ambiguous,
    PointNotOnBoundary,
    Degenerate,
    ZeroScale,
    NotAnEigenpair,
    NotNormalized,
    EmptyFamily,
    OutsideRange,
    DependentVectors,
    AnchorInfeasible,
    ScalingViolated,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-readable kind next to the human message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace numrange
