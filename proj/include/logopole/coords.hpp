#pragma once

namespace logopole {

// Spherical frames centred at the origin O, at O' = (0,0,R) and at
// O'' = (0,0,-R).
enum class Frame { O, Primed, DoublePrimed };

// Spherical coordinates of a point in one frame, scaled by R.
struct FrameCoords {
    double r = 0.0;           // distance to the frame origin
    double z = 0.0;           // axial offset from the frame origin
    double u = 1.0;           // cos(theta)
    double sin_theta = 0.0;   // rho / r
    double one_minus_u = 0.0; // 1 - u without cancellation
    double one_plus_u = 2.0;  // 1 + u without cancellation
};

// Prolate spheroidal coordinates (xi >= 1, |eta| <= 1) together with the
// cancellation-free pieces the special functions need.
struct SpheroidalCoords {
    double xi = 1.0;
    double eta = 0.0;
    double xi_minus_1 = 0.0;
    double xi2_minus_1 = 0.0;
    double one_minus_eta2 = 1.0;
};

class FieldPoint {
public:
    double rho() const { return rho_; }
    double z() const { return z_; }
    double phi() const { return phi_; }
    double scale() const { return R_; }

    double rho_hat() const { return rho_hat_; }
    double z_hat() const { return z_hat_; }

    const FrameCoords& frame(Frame f) const;
    // Focal segment O O' (0 <= z <= R): xibar = (r + r')/R, etabar = (r - r')/R.
    const SpheroidalCoords& offset() const { return offset_; }
    // Focal segment O'' O' (-R <= z <= R): xi = (r'' + r')/2R, eta = (r'' - r')/2R.
    const SpheroidalCoords& centred() const { return centred_; }

private:
    friend FieldPoint make_point(double rho, double z, double phi, double R);

    double rho_ = 0.0, z_ = 0.0, phi_ = 0.0, R_ = 1.0;
    double rho_hat_ = 0.0, z_hat_ = 0.0;
    FrameCoords o_, primed_, double_primed_;
    SpheroidalCoords offset_, centred_;
};

FieldPoint make_point(double rho, double z, double phi, double R);

// Point with the given offset spheroidal coordinates (xibar >= 1, |etabar| <= 1).
FieldPoint point_from_offset(double xibar, double etabar, double phi, double R);

// Point with the given centred spheroidal coordinates (xi >= 1, |eta| <= 1).
FieldPoint point_from_centred(double xi, double eta, double phi, double R);

// Euclidean distance from the point to the segment {rho = 0, 0 <= z <= R}.
double singular_distance(const FieldPoint& p);

// The same rho and phi with z replaced by R - z.
FieldPoint flipped(const FieldPoint& p);
// The same rho and phi with z replaced by R + z.
FieldPoint shifted(const FieldPoint& p);

} // namespace logopole
