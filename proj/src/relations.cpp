#include "logopole/relations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "logopole/errors.hpp"
#include "logopole/legendre.hpp"
#include "logopole/logopoles.hpp"
#include "logopole/numerics.hpp"

namespace logopole {
namespace {

constexpr double kEps = 0x1p-52;

void require_pssh_indices(int n, int m)
{
    if (m < 0 || n < m)
        fail(ErrorKind::UnsupportedIndex, "expansion needs n >= m >= 0");
}

FieldPoint meridional(const FieldPoint& p)
{
    return make_point(p.rho(), p.z(), 0.0, p.scale());
}

// d^m P_p / dx^m = (2m-1)!! C_{p-m}^{(m+1/2)}(x).
double legendre_derivative(int p, int m, double x)
{
    if (p < m)
        return 0.0;
    const double lam = m + 0.5;
    double c0 = 1.0, c1 = 2.0 * lam * x;
    if (p == m)
        return double_factorial(2 * m - 1);
    for (int k = 2; k <= p - m; ++k) {
        const double c2 = (2.0 * x * (k + lam - 1.0) * c1 - (k + 2.0 * lam - 2.0) * c0) / k;
        c0 = c1;
        c1 = c2;
    }
    return double_factorial(2 * m - 1) * c1;
}

// (-1)^m (p-m)!/(p+m)! (2p+1)/2^n int_{-1}^{1} (1+v)^{n+m} d^m P_p(v) dv.
struct GaussRule {
    std::vector<double> x, w;
};

// N-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_N.
const GaussRule& gauss_rule(int N)
{
    static std::map<int, GaussRule> cache;
    GaussRule& g = cache[N];
    if (!g.x.empty())
        return g;
    for (int i = 0; i < N; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (N + 0.5)), dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16)
                break;
        }
        g.x.push_back(x);
        g.w.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    }
    return g;
}

// (-1)^m (p-m)!/(p+m)! (2p+1)/2^n int_{-1}^{1} (1+v)^{n+m} d^m P_p(v) dv.
// The integrand is a polynomial of degree n + p, so Gauss-Legendre is exact.
std::pair<double, double> projected_beta(int n, int m, int p)
{
    const GaussRule& g = gauss_rule((n + p) / 2 + 1);
    CompensatedSum sum;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        sum.add(g.w[i] * std::pow(1.0 + g.x[i], n + m) * legendre_derivative(p, m, g.x[i]));
    const double pre = sign_power(m) / factorial_ratio(p + m, p - m) * (2 * p + 1) / std::ldexp(1.0, n);
    return {pre * sum.value(), std::fabs(pre) * 8 * kEps * (p + 1) * sum.magnitude()};
}

std::pair<double, double> naive_beta(int n, int m, int p)
{
    CompensatedSum sum;
    for (int k = m; k <= p; ++k)
        sum.add(2.0 * (2 * p + 1) / (n + k + 1) * sign_power(p + k + m) * factorial_ratio(p + k, p + m) *
                binomial(p - m, k - m) / factorial(k));
    return {sum.value(), 4 * kEps * sum.magnitude()};
}

double closed_m1_beta(int n, int p)
{
    const double b = -2.0 * (2 * p + 1) / (p * (p + 1.0));
    if (p > n)
        return b;
    return b * (1.0 - factorial(n) * factorial(n + 1) / (factorial(n + p + 1) * factorial(n - p)));
}

double minus_m_beta(int m, int p)
{
    return sign_power(m) * 2.0 * (1.0 + sign_power(p + m)) * (2 * p + 1) / (factorial(m - 1) * (p - m + 1.0) * (p + m));
}

} // namespace

ExpansionCoeffs legendre_density_coefficients(int n, int m)
{
    require_pssh_indices(n, m);
    ExpansionCoeffs c;
    c.family = ExpansionFamily::QPvsL;
    c.n = n;
    c.m = m;
    const double lead = factorial_ratio(n + m, n - m);
    for (int p = 0; p <= n; ++p) {
        c.coeffs.push_back(lead * sign_power(p + n + m) * factorial_ratio(n + p, p + m) /
                           (std::ldexp(1.0, p) * factorial(p) * factorial(n - p)));
        c.unstable.push_back(false);
        c.error.push_back(4 * kEps * std::fabs(c.coeffs.back()));
    }
    return c;
}

ExpansionCoeffs pssh_offset_coefficients(int n, int m)
{
    require_pssh_indices(n, m);
    ExpansionCoeffs c;
    c.family = ExpansionFamily::QPvsL;
    c.n = n;
    c.m = m;
    const double lead = factorial_ratio(n + m, n - m);
    for (int p = 0; p <= n; ++p) {
        c.coeffs.push_back(lead * sign_power(p + n) * factorial_ratio(n + p, p + m) /
                           (2.0 * factorial(p) * factorial(n - p)));
        c.unstable.push_back(false);
        c.error.push_back(4 * kEps * std::fabs(c.coeffs.back()));
    }
    return c;
}

EvalResult pssh_offset_from_logopoles(int n, int m, const FieldPoint& p)
{
    const ExpansionCoeffs c = pssh_offset_coefficients(n, m);
    const FieldPoint p0 = meridional(p);
    CompensatedSum sum;
    double err = 0.0;
    for (int k = 0; k <= n; ++k) {
        const EvalResult l = evaluate_logopole(k, m, p0);
        const double term = c[k] * l.value.real();
        sum.add(term);
        err += std::fabs(c[k]) * l.est_error + 4 * kEps * std::fabs(term);
    }
    return with_phase(sum.value(), m, p.phi(), Method::LogopoleSum, err + 2 * kEps * sum.magnitude(), n + 1);
}

ExpansionCoeffs beta_coefficients(int n, int m, int p_max, BetaRoute route)
{
    if (m < 0 || n < -m)
        fail(ErrorKind::UnsupportedIndex, "beta coefficients need m >= 0 and n >= -m");
    if (p_max < m)
        fail(ErrorKind::InvalidArgument, "beta coefficients need p_max >= m");
    switch (route) {
    case BetaRoute::NaiveSum:
        if (p_max > 80)
            fail(ErrorKind::InvalidArgument, "naive beta sum is limited to p_max <= 80");
        break;
    case BetaRoute::ClosedM1:
        if (m != 1 || n < 0)
            fail(ErrorKind::UnsupportedIndex, "closed beta form needs m = 1 and n >= 0");
        break;
    case BetaRoute::MinusMConjecture:
        if (m < 1 || n != -m)
            fail(ErrorKind::UnsupportedIndex, "n = -m beta form needs m >= 1 and n = -m");
        break;
    case BetaRoute::QuadratureProjection: break;
    }
    ExpansionCoeffs c;
    c.family = ExpansionFamily::Beta;
    c.n = n;
    c.m = m;
    c.first = m;
    for (int p = m; p <= p_max; ++p) {
        double v = 0.0, e = 0.0;
        bool unstable = false;
        switch (route) {
        case BetaRoute::NaiveSum:
            std::tie(v, e) = naive_beta(n, m, p);
            unstable = p > 20;
            break;
        case BetaRoute::ClosedM1:
            v = closed_m1_beta(n, p);
            e = 4 * kEps * std::fabs(v);
            break;
        case BetaRoute::MinusMConjecture:
            v = minus_m_beta(m, p);
            e = 4 * kEps * std::fabs(v);
            break;
        case BetaRoute::QuadratureProjection: std::tie(v, e) = projected_beta(n, m, p); break;
        }
        c.coeffs.push_back(v);
        c.error.push_back(e);
        c.unstable.push_back(unstable);
    }
    return c;
}

EvalResult logopole_from_pssh_series(int n, int m, const FieldPoint& p, int p_cap)
{
    if (m < 0 || n < -m)
        fail(ErrorKind::UnsupportedIndex, "series needs m >= 0 and n >= -m");
    const SpheroidalCoords& s = p.offset();
    if (s.xi_minus_1 <= 0.0)
        fail(ErrorKind::FocalSegmentSingularity, "spheroidal series is singular on the segment");
    const DegreeSeries q = legendre_q_column(p_cap, m, xi_arg(s));
    const LegendreArg eta = eta_arg(s);
    CompensatedSum sum;
    double err = 0.0;
    int quiet = 0;
    for (int k = m; k <= p_cap; ++k) {
        const auto [b, be] = projected_beta(n, m, k);
        const double h = q[k] * legendre_p(k, m, eta);
        const double term = b * h;
        sum.add(term);
        err += be * std::fabs(h);
        quiet = std::fabs(term) < 1e-14 * std::fabs(sum.value()) ? quiet + 1 : 0;
        if (quiet >= 5)
            return with_phase(sum.value(), m, p.phi(), Method::HarmonicSeries,
                              err + 4 * kEps * sum.magnitude() + 5e-14 * std::fabs(sum.value()), k - m + 1);
    }
    throw Error(ErrorKind::NonConvergence, "spheroidal series reached its degree cap", sum.value());
}

EvalResult pssh_centred_negative_order(int n, int m, const FieldPoint& p)
{
    require_pssh_indices(n, m);
    const SpheroidalCoords& s = p.centred();
    if (s.xi_minus_1 <= 0.0)
        fail(ErrorKind::FocalSegmentSingularity, "spheroidal harmonic is singular on the focal segment");
    const double v = legendre_q(n, m, xi_arg(s)).value * legendre_p(n, -m, eta_arg(s));
    return with_phase(v, m, p.phi(), Method::Direct, 8 * kEps * std::fabs(v) * (n + m + 1), 1);
}

ExpansionCoeffs centred_coefficients(int n, int m)
{
    require_pssh_indices(n, m);
    ExpansionCoeffs c;
    c.family = ExpansionFamily::Centred;
    c.n = n;
    c.m = m;
    for (int p = 0; p <= n; ++p) {
        c.coeffs.push_back(sign_power(p) * factorial_ratio(n + p, p + m) /
                           (std::ldexp(1.0, p + 1) * factorial(p) * factorial(n - p)));
        c.unstable.push_back(false);
        c.error.push_back(4 * kEps * std::fabs(c.coeffs.back()));
    }
    return c;
}

EvalResult centred_pssh_from_logopoles(int n, int m, const FieldPoint& p)
{
    const ExpansionCoeffs c = centred_coefficients(n, m);
    const FieldPoint p0 = meridional(p);
    const FieldPoint fl = flipped(p0);
    const FieldPoint sh = shifted(p0);
    const double parity = sign_power(n + m);
    CompensatedSum sum;
    double err = 0.0;
    for (int k = 0; k <= n; ++k) {
        const EvalResult a = evaluate_logopole(k, m, fl);
        const EvalResult b = evaluate_logopole(k, m, sh);
        const double term = c[k] * (a.value.real() + parity * b.value.real());
        sum.add(term);
        err += std::fabs(c[k]) * (a.est_error + b.est_error) + 4 * kEps * std::fabs(term);
    }
    return with_phase(sum.value(), m, p.phi(), Method::LogopoleSum, err + 2 * kEps * sum.magnitude(), 2 * (n + 1));
}

EvalResult pssh_derivative_series(int n, int m, const FieldPoint& p, DerivativeOp op, int k_max, double tol)
{
    require_pssh_indices(n, m);
    if (k_max < n + 1)
        fail(ErrorKind::InvalidArgument, "derivative series needs k_max >= n + 1");
    const SpheroidalCoords& s = p.centred();
    if (s.xi_minus_1 <= 0.0)
        fail(ErrorKind::FocalSegmentSingularity, "derivative series needs xi > 1");
    const int order = op == DerivativeOp::DPlus ? m + 1 : m;
    const DegreeSeries q = legendre_q_column(k_max, order, xi_arg(s));
    const LegendreArg eta = eta_arg(s);
    const int k0 = op == DerivativeOp::RDr ? n : n + 1;
    CompensatedSum sum;
    double last = 0.0, prev = 0.0;
    for (int k = k0; k <= k_max; k += 2) {
        const double w = op == DerivativeOp::RDr && k == n ? n + 1.0 : 2.0 * k + 1.0;
        const double term = -w * q[k] * legendre_p(k, -order, eta);
        sum.add(term);
        prev = last;
        last = term;
    }
    // Q_k(xi) decays like (xi - sqrt(xi^2 - 1))^k; take the slower of that
    // and the observed ratio over the last two kept terms.
    double ratio = std::pow(s.xi - std::sqrt(s.xi2_minus_1), 2);
    if (prev != 0.0 && last != 0.0)
        ratio = std::max(ratio, std::fabs(last / prev));
    const double edge = std::max(std::fabs(last), std::fabs(prev));
    const double tail = ratio < 1.0 ? edge * ratio / (1.0 - ratio) : INFINITY;
    const double v = sum.value();
    if (tail > tol * std::fabs(v))
        throw Error(ErrorKind::SlowConvergence,
                    "derivative series tail " + std::to_string(tail) + " exceeds tolerance at k_max", v);
    return with_phase(v, order, p.phi(), Method::HarmonicSeries, tail + 4 * kEps * sum.magnitude(),
                      (k_max - k0) / 2 + 1);
}

} // namespace logopole
