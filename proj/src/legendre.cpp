#include "logopole/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logopole/errors.hpp"
#include "logopole/numerics.hpp"

namespace logopole {

namespace {

constexpr int kMaxExteriorPadding = 2000000;

void require_off_singular(const LegendreArg& a)
{
    if (a.gap <= 0.0 || a.s == 0.0)
        throw Error(ErrorKind::SingularArgument, "second-kind Legendre function at x = +-1");
}

void require_supported_regime(const LegendreArg& a)
{
    if (a.regime == Regime::Exterior && a.x < 1.0)
        throw Error(ErrorKind::DomainError, "arguments x < -1 are not supported");
}

double q0(const LegendreArg& a)
{
    if (a.regime == Regime::Exterior)
        return 0.5 * std::log1p(2.0 / a.gap);
    const double ax = std::fabs(a.x);
    if (ax < 0.5)
        return std::atanh(a.x);
    return std::copysign(0.5 * std::log1p(2.0 * ax / a.gap), a.x);
}

// Q_{-j-1}^m on the interval for 0 <= j < m, as a terminating series.
double q_negative_degree(int j, int m, const LegendreArg& a)
{
    const double x = a.x;
    const int top = m + j;
    CompensatedSum sum;
    double prod = 1.0;
    for (int q = 0; 2 * q <= top; ++q) {
        if (q > 0)
            prod *= (2 * j - 2 * (q - 1) - 1);
        const double term = sign_power(q + j) * std::pow(x, top - 2 * q) /
                            (factorial(top - 2 * q) * double_factorial(2 * q) * prod);
        sum.add(term);
    }
    return factorial(m + j) * factorial(m - j - 1) * double_factorial(2 * j - 1) / std::pow(a.s, m) * sum.value();
}

// W_k^0 for k = -1 .. k_max.
DegreeSeries w_base(int k_max)
{
    DegreeSeries w;
    w.first = -1;
    w.values.assign(static_cast<std::size_t>(std::max(k_max, -1) + 2), 0.0);
    return w;
}

void fill_w0(DegreeSeries& w, double x)
{
    const int k_max = w.last();
    w[-1] = 0.0;
    if (k_max >= 0)
        w[0] = 1.0;
    // (n+1) W_n - (2n+1) x W_{n-1} + n W_{n-2} = 0
    for (int n = 1; n <= k_max; ++n)
        w[n] = ((2 * n + 1) * x * w[n - 1] - n * w[n - 2]) / (n + 1);
}

// Q_n^0 for n = 0 .. n_max and x > 1.
std::vector<double> exterior_q0_column(int n_max, const LegendreArg& a)
{
    std::vector<double> q(static_cast<std::size_t>(n_max + 1));
    const double x = a.x;
    const double base = q0(a);
    q[0] = base;
    if (n_max == 0)
        return q;
    const double acoshx = std::log1p(a.gap + a.s);
    if (n_max * acoshx <= 2.0) {
        // Close to x = 1 the split P_n Q_0 - W_{n-1} has little cancellation.
        DegreeSeries w = w_base(n_max - 1);
        fill_w0(w, x);
        double pm1 = 1.0, p = x;
        q[1] = x * base - 1.0;
        for (int n = 1; n < n_max; ++n) {
            const double pn1 = ((2 * n + 1) * x * p - n * pm1) / (n + 1);
            pm1 = p;
            p = pn1;
            q[static_cast<std::size_t>(n + 1)] = p * base - w[n];
        }
        return q;
    }
    // Ratios r_n = Q_n/Q_{n-1} = n / ((2n+1)x - (n+1) r_{n+1}), seeded at zero.
    const int start = exterior_start_degree(n_max, x, a.gap);
    double r = 0.0;
    for (int n = start; n > n_max; --n)
        r = n / ((2 * n + 1) * x - (n + 1) * r);
    std::vector<double> ratios(static_cast<std::size_t>(n_max + 1));
    for (int n = n_max; n >= 1; --n) {
        r = n / ((2 * n + 1) * x - (n + 1) * r);
        ratios[static_cast<std::size_t>(n)] = r;
    }
    for (int n = 1; n <= n_max; ++n)
        q[static_cast<std::size_t>(n)] = q[static_cast<std::size_t>(n - 1)] * ratios[static_cast<std::size_t>(n)];
    return q;
}

} // namespace

LegendreArg LegendreArg::of(double x)
{
    LegendreArg a;
    a.x = x;
    const double ax = std::fabs(x);
    if (ax <= 1.0) {
        a.regime = Regime::Interval;
        a.gap = 1.0 - ax;
        a.s = std::sqrt((1.0 - x) * (1.0 + x));
    } else {
        a.regime = Regime::Exterior;
        a.gap = ax - 1.0;
        a.s = std::sqrt((ax - 1.0) * (ax + 1.0));
    }
    return a;
}

LegendreArg LegendreArg::interval(double x, double one_minus_x2)
{
    LegendreArg a;
    a.x = x;
    a.regime = Regime::Interval;
    a.s = std::sqrt(std::max(0.0, one_minus_x2));
    a.gap = std::max(0.0, one_minus_x2) / (1.0 + std::fabs(x));
    return a;
}

LegendreArg LegendreArg::exterior(double x, double x_minus_1)
{
    LegendreArg a;
    a.x = x;
    a.regime = Regime::Exterior;
    a.gap = x_minus_1;
    a.s = std::sqrt(x_minus_1 * (x + 1.0));
    return a;
}

LegendreArg angular_arg(const FrameCoords& f)
{
    LegendreArg a;
    a.x = f.u;
    a.regime = Regime::Interval;
    a.s = f.sin_theta;
    a.gap = f.u >= 0.0 ? f.one_minus_u : f.one_plus_u;
    return a;
}

LegendreArg xi_arg(const SpheroidalCoords& s)
{
    return LegendreArg::exterior(s.xi, s.xi_minus_1);
}

LegendreArg eta_arg(const SpheroidalCoords& s)
{
    return LegendreArg::interval(s.eta, s.one_minus_eta2);
}

DegreeSeries legendre_p_column(int n_max, int m, const LegendreArg& a)
{
    if (m < 0)
        throw Error(ErrorKind::DomainError, "column requires m >= 0");
    require_supported_regime(a);
    DegreeSeries p;
    p.first = 0;
    p.values.assign(static_cast<std::size_t>(std::max(n_max, -1) + 1), 0.0);
    if (m > n_max)
        return p;
    double pmm = 1.0;
    for (int j = 1; j <= m; ++j)
        pmm *= (2 * j - 1) * a.s;
    p[m] = pmm;
    if (m + 1 <= n_max)
        p[m + 1] = (2 * m + 1) * a.x * pmm;
    for (int n = m + 1; n < n_max; ++n)
        p[n + 1] = ((2 * n + 1) * a.x * p[n] - (n + m) * p[n - 1]) / (n - m + 1);
    return p;
}

double legendre_p(int n, int m, const LegendreArg& a)
{
    if (n < 0)
        throw Error(ErrorKind::InvalidDegree, "P_n^m requires n >= 0");
    if (m < 0) {
        const int k = -m;
        if (k > n) {
            if (a.regime != Regime::Interval)
                throw Error(ErrorKind::DomainError, "P_n^{-m} with m > n is implemented for |x| < 1 only");
            return legendre_p_negative_order(n, k, a.x);
        }
        return sign_power(k) * factorial_ratio(n - k, n + k) * legendre_p_column(n, k, a)[n];
    }
    return legendre_p_column(n, m, a)[n];
}

double legendre_p(int n, int m, double x)
{
    return legendre_p(n, m, LegendreArg::of(x));
}

double legendre_p_negative_order(int n, int m, double x)
{
    if (n < 0 || m <= 0)
        throw Error(ErrorKind::InvalidArgument, "P_n^{-m} requires n >= 0 and m > 0");
    if (!(std::fabs(x) < 1.0))
        throw Error(ErrorKind::DomainError, "P_n^{-m} is implemented for |x| < 1");
    if (m <= n)
        return sign_power(m) * factorial_ratio(n - m, n + m) * legendre_p(n, m, x);
    // (-1)^m/m! ((1-x)/(1+x))^{m/2} 2F1(-n, n+1; 1+m; (1-x)/2)
    const double t = (1.0 - x) / 2.0;
    CompensatedSum sum;
    double term = 1.0;
    for (int j = 0; j <= n; ++j) {
        sum.add(term);
        term *= static_cast<double>(n + 1 + j) * (j - n) / ((1.0 + m + j) * (j + 1)) * t;
    }
    return sign_power(m) / factorial(m) * std::pow((1.0 - x) / (1.0 + x), 0.5 * m) * sum.value();
}

DegreeSeries w_column(int k_max, int m, const LegendreArg& a)
{
    if (m < 0)
        throw Error(ErrorKind::DomainError, "W polynomials require m >= 0");
    if (k_max < -1)
        throw Error(ErrorKind::InvalidDegree, "W_k^m requires k >= -1");
    require_supported_regime(a);
    if (m > 0 && a.s == 0.0)
        throw Error(ErrorKind::SingularArgument, "W_k^m with m > 0 at x = +-1");
    DegreeSeries w = w_base(k_max + m);
    fill_w0(w, a.x);
    const bool exterior = a.regime == Regime::Exterior;
    for (int j = 0; j < m; ++j) {
        DegreeSeries next = w_base(w.last() - 1);
        for (int k = -1; k <= next.last(); ++k) {
            const double lo = (k + j + 2) * a.x * w[k];
            const double hi = (k - j + 2) * w[k + 1];
            next[k] = (exterior ? hi - lo : lo - hi) / a.s;
        }
        w = std::move(next);
    }
    return w;
}

double w_poly(int k, int m, double x)
{
    return w_column(k, m, LegendreArg::of(x))[k];
}

double q_minus_m_polynomial(int m, const LegendreArg& a)
{
    require_off_singular(a);
    if (m == 0)
        return q0(a);
    CompensatedSum sum;
    const double x2 = a.x * a.x;
    double xp = a.x;
    for (int k = 0; k < m; ++k) {
        sum.add(sign_power(k) * binomial(m - 1, k) * xp / (2 * k + 1));
        xp *= x2;
    }
    return double_factorial(2 * m - 1) / std::pow(a.s, m) * sum.value();
}

int exterior_start_degree(int n_max, double x, double x_minus_1)
{
    const double acoshx = std::log1p(x_minus_1 + std::sqrt(x_minus_1 * (x + 1.0)));
    const double pad = std::max(20.0, std::ceil(20.0 / acoshx));
    return n_max + static_cast<int>(std::min(pad, static_cast<double>(kMaxExteriorPadding)));
}

DegreeSeries legendre_q_column(int n_max, int m, const LegendreArg& a)
{
    if (m < 0)
        throw Error(ErrorKind::DomainError, "column requires m >= 0");
    require_supported_regime(a);
    require_off_singular(a);
    DegreeSeries q;
    if (a.regime == Regime::Interval) {
        q.first = -m;
        if (n_max < -m)
            return q;
        q.values.assign(static_cast<std::size_t>(n_max + m + 1), 0.0);
        for (int k = -m; k <= std::min(-1, n_max); ++k)
            q[k] = q_negative_degree(-k - 1, m, a);
        if (n_max < 0)
            return q;
        // Q_k^0 by the n recurrence, then upward in order at fixed k.
        std::vector<double> q0col(static_cast<std::size_t>(n_max + 1));
        q0col[0] = q0(a);
        if (n_max >= 1)
            q0col[1] = a.x * q0col[0] - 1.0;
        for (int k = 1; k < n_max; ++k)
            q0col[static_cast<std::size_t>(k + 1)] =
                ((2 * k + 1) * a.x * q0col[static_cast<std::size_t>(k)] - k * q0col[static_cast<std::size_t>(k - 1)]) /
                (k + 1);
        for (int k = 0; k <= n_max; ++k) {
            const double qk0 = q0col[static_cast<std::size_t>(k)];
            if (m == 0) {
                q[k] = qk0;
                continue;
            }
            double lo = qk0;
            double hi = k == 0 ? 1.0 / a.s : k * (q0col[static_cast<std::size_t>(k - 1)] - a.x * qk0) / a.s;
            // Q^{j+1} = 2j x/s Q^j - (k+j)(k-j+1) Q^{j-1}
            for (int j = 1; j < m; ++j) {
                const double next = 2.0 * j * a.x / a.s * hi - static_cast<double>(k + j) * (k - j + 1) * lo;
                lo = hi;
                hi = next;
            }
            q[k] = hi;
        }
        return q;
    }

    q.first = 0;
    if (n_max < 0)
        throw Error(ErrorKind::DomainError, "Q_n^m for x > 1 requires n >= 0");
    q.values.assign(static_cast<std::size_t>(n_max + 1), 0.0);
    const std::vector<double> q0col = exterior_q0_column(n_max, a);
    for (int n = 0; n <= n_max; ++n) {
        const double qn0 = q0col[static_cast<std::size_t>(n)];
        if (m == 0) {
            q[n] = qn0;
            continue;
        }
        double qn1 = n == 0 ? -1.0 / a.s : n * (a.x * qn0 - q0col[static_cast<std::size_t>(n - 1)]) / a.s;
        // Q^{j+2} = -2(j+1) x/s Q^{j+1} + (n-j)(n+j+1) Q^j
        double lo = qn0, hi = qn1;
        for (int j = 0; j + 1 < m; ++j) {
            const double next = -2.0 * (j + 1) * a.x / a.s * hi + static_cast<double>(n - j) * (n + j + 1) * lo;
            lo = hi;
            hi = next;
        }
        q[n] = hi;
    }
    return q;
}

LegendreValue legendre_q(int n, int m, const LegendreArg& a)
{
    if (m < 0) {
        const int k = -m;
        if (n < k)
            throw Error(ErrorKind::UnsupportedIndex, "Q_n^{-m} requires n >= m");
        LegendreValue v = legendre_q(n, k, a);
        v.value *= sign_power(k) * factorial_ratio(n - k, n + k);
        return v;
    }
    if (n < -m)
        throw Error(ErrorKind::DomainError, "Q_n^m is finite only for n >= -m");
    if (a.regime == Regime::Exterior && n < 0)
        throw Error(ErrorKind::DomainError, "Q_n^m for x > 1 requires n >= 0");
    LegendreValue v;
    v.regime = a.regime;
    v.has_log_part = n >= m;
    v.value = legendre_q_column(n, m, a)[n];
    return v;
}

LegendreValue legendre_q(int n, int m, double x)
{
    return legendre_q(n, m, LegendreArg::of(x));
}

} // namespace logopole
