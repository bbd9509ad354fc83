#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace testing_support {

inline double rel_err(double a, double b)
{
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

inline double rel_err(std::complex<double> a, std::complex<double> b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Radical inverse in the given prime base (Halton sequence component).
inline double halton(int index, int base)
{
    double f = 1.0, r = 0.0;
    for (int i = index; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

struct MeridionalPoint {
    double rho;
    double z;
};

// Quasi-random points in rho in (0, rho_max], z in [z_min, z_max] whose
// distance to the segment {rho=0, 0<=z<=1} exceeds min_dist.
inline std::vector<MeridionalPoint> quasi_random_points(int count, double rho_max, double z_min, double z_max,
                                                        double min_dist, int offset = 1)
{
    std::vector<MeridionalPoint> pts;
    for (int i = offset; static_cast<int>(pts.size()) < count; ++i) {
        const double rho = rho_max * (0.02 + 0.98 * halton(i, 2));
        const double z = z_min + (z_max - z_min) * halton(i, 3);
        const double zc = std::clamp(z, 0.0, 1.0);
        if (std::hypot(rho, z - zc) > min_dist)
            pts.push_back({rho, z});
    }
    return pts;
}

} // namespace testing_support
