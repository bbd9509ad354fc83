#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace logopole {

enum class ErrorKind {
    NonPositiveScale,
    NegativeRho,
    InvalidDegree,
    InvalidArgument,
    SingularArgument,
    DomainError,
    OriginSingularity,
    AxisSingularity,
    FocalSegmentSingularity,
    SingularRegion,
    UnsupportedIndex,
    DivergentRegion,
    NonConvergence,
    RegionViolation,
    PoleDivision,
    SlowConvergence,
    NoConvergence,
    TailTooLarge,
};

const char* to_string(ErrorKind kind);

// True for the kinds that mean "the function is singular here" rather than
// "the computation failed".
bool is_singular_kind(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<double> partial = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    // Partial value reached before a convergence failure, if any.
    std::optional<double> partial() const noexcept { return partial_; }

private:
    ErrorKind kind_;
    std::optional<double> partial_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

} // namespace logopole
