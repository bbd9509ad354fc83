#include "logopole/coords.hpp"

#include <algorithm>
#include <cmath>

#include "logopole/errors.hpp"

namespace logopole {

namespace {

FrameCoords frame_coords(double rho, double z)
{
    FrameCoords f;
    f.z = z;
    f.r = std::hypot(rho, z);
    if (f.r == 0.0)
        return f;
    f.u = z / f.r;
    f.sin_theta = rho / f.r;
    const double rho2 = rho * rho;
    if (z > 0.0) {
        f.one_minus_u = rho2 / (f.r * (f.r + z));
        f.one_plus_u = (f.r + z) / f.r;
    } else {
        f.one_minus_u = (f.r - z) / f.r;
        f.one_plus_u = rho2 / (f.r * (f.r - z));
    }
    return f;
}

// Shared construction for both spheroidal systems, given the two focal
// frames (lower and upper focus) and the half focal length in units of R.
SpheroidalCoords spheroidal(const FrameCoords& lower, const FrameCoords& upper, double half, double rho,
                            double zc)
{
    SpheroidalCoords s;
    const double sum = lower.r + upper.r;
    s.xi = sum / (2.0 * half);
    // r_lower - r_upper = (r_lower^2 - r_upper^2) / (r_lower + r_upper)
    s.eta = sum > 0.0 ? 2.0 * zc / sum : 0.0;
    s.eta = std::clamp(s.eta, -1.0, 1.0);
    s.xi_minus_1 = (lower.r * lower.one_minus_u + upper.r * upper.one_plus_u) / (2.0 * half);
    s.xi = 1.0 + s.xi_minus_1;
    s.xi2_minus_1 = s.xi_minus_1 * (s.xi + 1.0);
    if (s.xi2_minus_1 > 0.0)
        s.one_minus_eta2 = std::min(1.0, rho * rho / (half * half * s.xi2_minus_1));
    else
        s.one_minus_eta2 = (1.0 - s.eta) * (1.0 + s.eta);
    return s;
}

} // namespace

FieldPoint make_point(double rho, double z, double phi, double R)
{
    if (!(R > 0.0))
        throw Error(ErrorKind::NonPositiveScale, "R must be positive");
    if (rho < 0.0)
        throw Error(ErrorKind::NegativeRho, "rho must be non-negative");
    if (!std::isfinite(rho) || !std::isfinite(z) || !std::isfinite(phi) || !std::isfinite(R))
        throw Error(ErrorKind::InvalidArgument, "coordinates must be finite");

    FieldPoint p;
    p.rho_ = rho;
    p.z_ = z;
    p.phi_ = phi;
    p.R_ = R;
    p.rho_hat_ = rho / R;
    p.z_hat_ = z / R;
    p.o_ = frame_coords(p.rho_hat_, p.z_hat_);
    p.primed_ = frame_coords(p.rho_hat_, p.z_hat_ - 1.0);
    p.double_primed_ = frame_coords(p.rho_hat_, p.z_hat_ + 1.0);
    // Offset system: foci at O (z=0) and O' (z=R), centre z = R/2.
    p.offset_ = spheroidal(p.o_, p.primed_, 0.5, p.rho_hat_, p.z_hat_ - 0.5);
    // Centred system: foci at O'' and O', centre z = 0.
    p.centred_ = spheroidal(p.double_primed_, p.primed_, 1.0, p.rho_hat_, p.z_hat_);
    return p;
}

const FrameCoords& FieldPoint::frame(Frame f) const
{
    switch (f) {
    case Frame::O: return o_;
    case Frame::Primed: return primed_;
    case Frame::DoublePrimed: return double_primed_;
    }
    return o_;
}

FieldPoint point_from_offset(double xibar, double etabar, double phi, double R)
{
    if (xibar < 1.0 || std::fabs(etabar) > 1.0)
        throw Error(ErrorKind::DomainError, "offset spheroidal coordinates out of range");
    const double z = R * (1.0 + xibar * etabar) / 2.0;
    const double rho = R * std::sqrt((xibar - 1.0) * (xibar + 1.0) * (1.0 - etabar) * (1.0 + etabar)) / 2.0;
    return make_point(rho, z, phi, R);
}

FieldPoint point_from_centred(double xi, double eta, double phi, double R)
{
    if (xi < 1.0 || std::fabs(eta) > 1.0)
        throw Error(ErrorKind::DomainError, "centred spheroidal coordinates out of range");
    const double z = R * xi * eta;
    const double rho = R * std::sqrt((xi - 1.0) * (xi + 1.0) * (1.0 - eta) * (1.0 + eta));
    return make_point(rho, z, phi, R);
}

double singular_distance(const FieldPoint& p)
{
    const double zc = std::clamp(p.z(), 0.0, p.scale());
    return std::hypot(p.rho(), p.z() - zc);
}

FieldPoint flipped(const FieldPoint& p)
{
    return make_point(p.rho(), p.scale() - p.z(), p.phi(), p.scale());
}

FieldPoint shifted(const FieldPoint& p)
{
    return make_point(p.rho(), p.scale() + p.z(), p.phi(), p.scale());
}

} // namespace logopole
