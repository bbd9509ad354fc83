#pragma once

#include <vector>

#include "logopole/coords.hpp"

// Associated Legendre functions without the Condon-Shortley phase:
//   P_n^m(x) = |1-x^2|^{m/2} d^m P_n/dx^m,  Q_n^m(x) = |1-x^2|^{m/2} d^m Q_n/dx^m
// with Q_0(x) = atanh(x) for |x| < 1 and Q_0(x) = acoth(x) for x > 1.
// Libraries that follow Abramowitz-Stegun/Ferrers conventions differ from
// these by (-1)^m on |x| < 1.
namespace logopole {

enum class Regime { Interval, Exterior };

struct LegendreValue {
    double value = 0.0;
    Regime regime = Regime::Interval;
    bool has_log_part = false;
};

// Argument together with sqrt|1-x^2| and the distance to the nearest
// singular point, both supplied without cancellation where possible.
struct LegendreArg {
    double x = 0.0;
    double s = 1.0;   // sqrt|1 - x^2|
    double gap = 1.0; // 1 - |x| on the interval, x - 1 outside
    Regime regime = Regime::Interval;

    static LegendreArg of(double x);
    static LegendreArg interval(double x, double one_minus_x2);
    static LegendreArg exterior(double x, double x_minus_1);
};

LegendreArg angular_arg(const FrameCoords& f);
LegendreArg xi_arg(const SpheroidalCoords& s);
LegendreArg eta_arg(const SpheroidalCoords& s);

// Values indexed by degree over a contiguous range [first, first + size).
struct DegreeSeries {
    int first = 0;
    std::vector<double> values;

    int last() const { return first + static_cast<int>(values.size()) - 1; }
    double operator[](int degree) const { return values.at(static_cast<std::size_t>(degree - first)); }
    double& operator[](int degree) { return values.at(static_cast<std::size_t>(degree - first)); }
};

// P_n^m for n >= 0 and -n <= m (negative m by reflection); zero for 0 <= n < m.
double legendre_p(int n, int m, double x);
double legendre_p(int n, int m, const LegendreArg& a);

// P_k^m for k = 0 .. n_max, m >= 0.
DegreeSeries legendre_p_column(int n_max, int m, const LegendreArg& a);

// P_n^{-m} for m > 0 and any n >= 0, on |x| < 1. For m > n this is the
// terminating hypergeometric series rather than the reflection formula.
double legendre_p_negative_order(int n, int m, double x);

// Q_n^m for n >= -m, m >= 0, x != +-1 (x > 1 requires n >= 0).
LegendreValue legendre_q(int n, int m, double x);
LegendreValue legendre_q(int n, int m, const LegendreArg& a);

// Q_k^m for k = -m .. n_max on the interval, or k = 0 .. n_max outside.
DegreeSeries legendre_q_column(int n_max, int m, const LegendreArg& a);

// W_k^m, the non-logarithmic part in Q_{k+1}^m = P_{k+1}^m Q_0 - W_k^m, for k >= -1.
double w_poly(int k, int m, double x);
// W_k^m for k = -1 .. k_max.
DegreeSeries w_column(int k_max, int m, const LegendreArg& a);

// (1-x^2)^{-m/2} (2m-1)!! sum_k (-1)^k C(m-1,k) x^{2k+1}/(2k+1), which is Q_{-m}^m.
double q_minus_m_polynomial(int m, const LegendreArg& a);

// Start index of the downward ratio recurrence for Q_n(x), x > 1.
int exterior_start_degree(int n_max, double x, double x_minus_1);

} // namespace logopole
