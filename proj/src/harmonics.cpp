#include "logopole/harmonics.hpp"

#include <cmath>
#include <limits>

#include "logopole/errors.hpp"
#include "logopole/legendre.hpp"
#include "logopole/numerics.hpp"

namespace logopole {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_order(int n, int m)
{
    if (m < 0 || n < 0)
        fail(ErrorKind::InvalidDegree, "harmonic needs n >= 0 and m >= 0");
}

// (n+k)! / (2 k! (k+m)! (n-k)!)
double offset_q_coefficient(int n, int m, int k)
{
    return 0.5 * factorial_ratio(n + k, n - k) / (factorial(k) * factorial(k + m));
}

} // namespace

EvalResult ssh_exterior(int n, int m, const FieldPoint& p, Frame frame)
{
    require_order(n, m);
    const FrameCoords& f = p.frame(frame);
    if (f.r == 0.0)
        fail(ErrorKind::OriginSingularity, "exterior harmonic is singular at the frame origin");
    if (n < m)
        return with_phase(0.0, m, p.phi(), Method::Direct, 0.0, 1);
    const double v = legendre_p(n, m, angular_arg(f)) / std::pow(f.r, n + 1);
    return with_phase(v, m, p.phi(), Method::Direct, 4 * kEps * std::fabs(v) * (n + 1), 1);
}

EvalResult ssh_regular(int n, int m, const FieldPoint& p, Frame frame)
{
    require_order(n, m);
    const FrameCoords& f = p.frame(frame);
    if (n < m)
        return with_phase(0.0, m, p.phi(), Method::Direct, 0.0, 1);
    const double v = legendre_p(n, m, angular_arg(f)) * std::pow(f.r, n);
    return with_phase(v, m, p.phi(), Method::Direct, 4 * kEps * std::fabs(v) * (n + 1), 1);
}

EvalResult ssh_second_kind(int n, int m, const FieldPoint& p, Frame frame)
{
    if (m < 0 || n < -m)
        fail(ErrorKind::InvalidDegree, "second-kind harmonic needs m >= 0 and n >= -m");
    if (p.rho() == 0.0)
        fail(ErrorKind::AxisSingularity, "second-kind harmonic is singular on the z-axis");
    const FrameCoords& f = p.frame(frame);
    const double v = legendre_q(n, m, angular_arg(f)).value * std::pow(f.r, n);
    return with_phase(v, m, p.phi(), Method::Direct, 8 * kEps * std::fabs(v) * (std::abs(n) + m + 1), 1);
}

EvalResult pssh(int n, int m, const FieldPoint& p, FocalSystem focal)
{
    require_order(n, m);
    if (n < m)
        fail(ErrorKind::InvalidDegree, "spheroidal harmonic needs n >= m");
    const SpheroidalCoords& s = focal == FocalSystem::Centred ? p.centred() : p.offset();
    if (s.xi_minus_1 <= 0.0)
        fail(ErrorKind::FocalSegmentSingularity, "spheroidal harmonic is singular on the focal segment");
    const double v = legendre_q(n, m, xi_arg(s)).value * legendre_p(n, m, eta_arg(s));
    return with_phase(v, m, p.phi(), Method::Direct, 8 * kEps * std::fabs(v) * (n + m + 1), 1);
}

EvalResult pssh_from_offset_q(int n, int m, const FieldPoint& p)
{
    require_order(n, m);
    if (n < m)
        fail(ErrorKind::InvalidDegree, "spheroidal harmonic needs n >= m");
    if (p.rho() == 0.0)
        fail(ErrorKind::AxisSingularity, "offset second-kind sum is singular on the z-axis");
    const FrameCoords& fp = p.frame(Frame::Primed);
    const FrameCoords& fpp = p.frame(Frame::DoublePrimed);
    const DegreeSeries qp = legendre_q_column(n, m, angular_arg(fp));
    const DegreeSeries qpp = legendre_q_column(n, m, angular_arg(fpp));
    CompensatedSum primed, double_primed;
    for (int k = 0; k <= n; ++k) {
        const double c = offset_q_coefficient(n, m, k);
        double_primed.add(sign_power(n + k + m) * c * std::pow(0.5 * fpp.r, k) * qpp[k]);
        primed.add(sign_power(m) * c * std::pow(0.5 * fp.r, k) * qp[k]);
    }
    const double v = double_primed.value() - primed.value();
    const double err = 8 * kEps * (double_primed.magnitude() + primed.magnitude()) * (n + m + 1);
    return with_phase(v, m, p.phi(), Method::SecondKindSum, err, 2 * (n + 1));
}

EvalResult pp_from_offset_regular(int n, int m, const FieldPoint& p)
{
    require_order(n, m);
    const FrameCoords& f = p.frame(Frame::DoublePrimed);
    const DegreeSeries pk = legendre_p_column(n, m, angular_arg(f));
    CompensatedSum sum;
    for (int k = m; k <= n; ++k)
        sum.add(sign_power(n + k + m) * 2.0 * offset_q_coefficient(n, m, k) * std::pow(0.5 * f.r, k) * pk[k]);
    return with_phase(sum.value(), m, p.phi(), Method::Direct, 2 * kEps * sum.magnitude(), n - m + 1);
}

} // namespace logopole
