#include "logopole/eval.hpp"

namespace logopole {

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::Direct: return "Direct";
    case Method::MultipoleSeries: return "MultipoleSeries";
    case Method::SecondKindSum: return "SecondKindSum";
    case Method::OffsetSeries: return "OffsetSeries";
    case Method::ForwardRecurrence: return "ForwardRecurrence";
    case Method::BackwardRecurrence: return "BackwardRecurrence";
    case Method::ClosedForm: return "ClosedForm";
    case Method::StableMinusM: return "StableMinusM";
    case Method::NaiveMinusM: return "NaiveMinusM";
    case Method::RecurrenceMinusM: return "RecurrenceMinusM";
    case Method::AxisFormula: return "AxisFormula";
    case Method::Separated: return "Separated";
    case Method::RecurrenceM: return "RecurrenceM";
    case Method::NegativeDegree: return "NegativeDegree";
    case Method::NegativeOrder: return "NegativeOrder";
    case Method::LogopoleSum: return "LogopoleSum";
    case Method::HarmonicSeries: return "HarmonicSeries";
    case Method::Quadrature: return "Quadrature";
    }
    return "Unknown";
}

} // namespace logopole
