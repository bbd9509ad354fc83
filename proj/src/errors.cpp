#include "logopole/errors.hpp"

namespace logopole {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::NegativeRho: return "NegativeRho";
    case ErrorKind::InvalidDegree: return "InvalidDegree";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularArgument: return "SingularArgument";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OriginSingularity: return "OriginSingularity";
    case ErrorKind::AxisSingularity: return "AxisSingularity";
    case ErrorKind::FocalSegmentSingularity: return "FocalSegmentSingularity";
    case ErrorKind::SingularRegion: return "SingularRegion";
    case ErrorKind::UnsupportedIndex: return "UnsupportedIndex";
    case ErrorKind::DivergentRegion: return "DivergentRegion";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::RegionViolation: return "RegionViolation";
    case ErrorKind::PoleDivision: return "PoleDivision";
    case ErrorKind::SlowConvergence: return "SlowConvergence";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::TailTooLarge: return "TailTooLarge";
    }
    return "Unknown";
}

bool is_singular_kind(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::SingularArgument:
    case ErrorKind::OriginSingularity:
    case ErrorKind::AxisSingularity:
    case ErrorKind::FocalSegmentSingularity:
    case ErrorKind::SingularRegion:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorKind kind, const std::string& what, std::optional<double> partial)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), partial_(partial)
{
}

void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace logopole
