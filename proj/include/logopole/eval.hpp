#pragma once

#include <complex>
#include <string_view>

namespace logopole {

enum class Method {
    Direct,             // closed composition of Legendre functions
    MultipoleSeries,    // sum of exterior harmonics about O (r > R)
    SecondKindSum,      // finite sum of second-kind harmonics
    OffsetSeries,       // sum of exterior harmonics about O' (r' > R)
    ForwardRecurrence,  // upward in degree (r < R)
    BackwardRecurrence, // downward in degree with rescaling (r > R)
    ClosedForm,         // explicit offset-spheroidal expression
    StableMinusM,       // n = -m in offset spheroidal form
    NaiveMinusM,        // n = -m as a difference of polynomials
    RecurrenceMinusM,   // n = -m by raising the order
    AxisFormula,        // m = 0 on the axis beyond the segment
    Separated,          // logarithmic / non-logarithmic split
    RecurrenceM,        // one order-raising step
    NegativeDegree,     // m = 0 family with n < 0
    NegativeOrder,      // reflection family m < 0
    LogopoleSum,        // finite sum of logopoles
    HarmonicSeries,     // series of spheroidal harmonics
    Quadrature,
};

std::string_view to_string(Method m);

// value = profile(phi = 0) * exp(i m phi).
struct EvalResult {
    std::complex<double> value;
    Method method = Method::Direct;
    double est_error = 0.0;
    int terms_used = 0;
};

inline std::complex<double> phase(int m, double phi)
{
    return m == 0 ? std::complex<double>(1.0, 0.0) : std::polar(1.0, m * phi);
}

inline EvalResult with_phase(double profile, int m, double phi, Method method, double est_error, int terms)
{
    return {profile * phase(m, phi), method, est_error, terms};
}

} // namespace logopole
