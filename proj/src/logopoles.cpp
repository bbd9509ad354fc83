#include "logopole/logopoles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "logopole/errors.hpp"
#include "logopole/legendre.hpp"
#include "logopole/numerics.hpp"
#include "logopole/oracle.hpp"

namespace logopole {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Everything in units of R.
struct Geo {
    double rho, z;
    double r, u, rp, up;
    double X, E, xm1, X2m1, omE2;
    const FieldPoint* p;
};

Geo geo(const FieldPoint& p)
{
    const FrameCoords& o = p.frame(Frame::O);
    const FrameCoords& q = p.frame(Frame::Primed);
    const SpheroidalCoords& s = p.offset();
    return {p.rho_hat(), p.z_hat(), o.r, o.u, q.r, q.u, s.xi, s.eta, s.xi_minus_1, s.xi2_minus_1, s.one_minus_eta2, &p};
}

void require_outside_tube(const FieldPoint& p, double tube)
{
    if (singular_distance(p) <= tube * p.scale())
        fail(ErrorKind::SingularRegion, "point lies inside the singular tube around the segment");
}

void require_standard(int n, int m)
{
    if (m < 0 || n < -m)
        fail(ErrorKind::UnsupportedIndex, "route requires m >= 0 and n >= -m");
}

bool on_axis_outside(const Geo& g)
{
    return g.rho == 0.0 && (g.z < 0.0 || g.z > 1.0);
}

// S_m^{m'} = (2m-1)!! rho^m / r'^{2m+1}.
double s_mm_primed(int m, const Geo& g)
{
    return double_factorial(2 * m - 1) * std::pow(g.rho / g.rp, m) / std::pow(g.rp, m + 1);
}

// Inhomogeneous term of the degree recurrence, r'^2 S_m^{m'}.
double lrec_source(int m, const Geo& g)
{
    return double_factorial(2 * m - 1) * std::pow(g.rho / g.rp, m) * std::pow(g.rp, 1 - m);
}

double l0_closed(const Geo& g)
{
    return std::log1p(2.0 / g.xm1);
}

// L_{-m+1}^m from L_{-m}^m.
double first_step(int m, const Geo& g, double l_minus_m)
{
    const double d = double_factorial(2 * m - 3);
    return g.z * l_minus_m - d * std::pow(g.rho, m) * (std::pow(g.rp, 1 - 2 * m) - std::pow(g.r, 1 - 2 * m));
}

// L_m^m from L_{m-1}^m and L_{m-1}^{m-1}.
double triangular_step(int m, const Geo& g, double l_m1_m, double l_m1_m1)
{
    return -double_factorial(2 * m - 3) * std::pow(g.rho, m) / std::pow(g.rp, 2 * m - 1) + g.z * l_m1_m +
           (2 * m - 1) * g.rho * l_m1_m1;
}

double generic_step(int n, int m, const Geo& g, double l_prev, double l_cur)
{
    return ((2 * n + 1) * g.z * l_cur - (n + m) * g.r * g.r * l_prev + lrec_source(m, g)) / (n - m + 1);
}

// Geometric-tail summation of sum_k coef(k) t_k where t_k obeys the
// spherical-harmonic recurrence: t_k = P_k^m(x)/r^{k+1}.
struct SeriesOut {
    double value, err;
    int terms;
};

template <class Coef>
SeriesOut harmonic_series(int m, double r, double x, double rho, Coef coef, const MethodPolicy& policy,
                          const char* what)
{
    const double q = 1.0 / r;
    CompensatedSum sum;
    double t_prev = 0.0;
    double t = double_factorial(2 * m - 1) * std::pow(rho / r, m) / std::pow(r, m + 1);
    int quiet = 0;
    for (int k = m; k - m < policy.max_terms; ++k) {
        const double c = coef(k);
        sum.add(c * t);
        // Envelope of |P_k^m| grows at most like k^{2m}; bound the tail with
        // the ratio q (1 + (2m+1)/k).
        const double ratio = q * (1.0 + (2.0 * m + 1.0) / (k + 1.0));
        // Zero leading weights say nothing about the tail.
        if (ratio < 1.0 && c != 0.0) {
            const double tail = (std::fabs(t) + std::fabs(t_prev)) * std::fabs(c) * ratio / (1.0 - ratio);
            if (tail <= policy.series_tol * std::fabs(sum.value()) || (t == 0.0 && t_prev == 0.0)) {
                if (++quiet >= 3)
                    return {sum.value(), tail + 4 * kEps * sum.magnitude(), k - m + 1};
            } else {
                quiet = 0;
            }
        }
        const double t_next = (k == m) ? (2 * m + 1) * x * t * q
                                       : ((2 * k + 1) * x * t * q - (k + m) * t_prev * q * q) / (k - m + 1);
        t_prev = t;
        t = t_next;
    }
    throw Error(ErrorKind::NonConvergence, std::string(what) + ": term cap reached", sum.value());
}

double stable_minus_m_profile(int m, const Geo& g, double* cond)
{
    if (m == 0) {
        if (cond)
            *cond = 1.0;
        return l0_closed(g);
    }
    const double X = g.X, E = g.E;
    const double B = (X - E) * (X + E);
    const double A = X * X * X * X - E * E;
    const double xb = X / B, ab = A / (B * B), eb = E * g.X2m1 / B;
    CompensatedSum outer;
    for (int q = 0; q < m; ++q) {
        CompensatedSum inner;
        for (int p = 0; p <= q; ++p) {
            const double c = sign_power(p + q) * binomial(q, p) * double_factorial(2 * m + 2 * p - 2 * q - 3) /
                             (double_factorial(2 * p - 1) * double_factorial(2 * m - 2 * q - 3));
            inner.add(c * std::pow(eb, 2 * p));
        }
        outer.add(std::pow(xb, 2 * q + 1) / (2 * q + 1) * binomial(m - 1, q) * std::pow(ab, m - 2 * q - 1) *
                  inner.value());
    }
    // 2^{m+1} (2m-1)!! ((1-E^2)/(X^2-1))^{m/2}, with (1-E^2)/(X^2-1) = (2 rho/(X^2-1))^2.
    const double ratio = 2.0 * g.rho / g.X2m1;
    double pre = 2.0;
    for (int j = 1; j <= m; ++j)
        pre *= 2.0 * (2 * j - 1) * ratio;
    if (cond)
        *cond = outer.value() == 0.0 ? 1.0 : outer.magnitude() / std::fabs(outer.value());
    return pre * outer.value();
}

// (2m-1)!! sum_k (-1)^k C(m-1,k) x^{2k+1}/(2k+1), so that
// r^{-m} Q_{-m}^m(u) = poly(u)/rho^m.
double minus_m_poly(int m, double x)
{
    CompensatedSum s;
    for (int k = 0; k < m; ++k)
        s.add(sign_power(k) * binomial(m - 1, k) * std::pow(x, 2 * k + 1) / (2 * k + 1));
    return double_factorial(2 * m - 1) * s.value();
}

double recurrence_minus_m_profile(int m, const Geo& g)
{
    const FieldPoint& p = *g.p;
    double L = legendre_q(0, 0, angular_arg(p.frame(Frame::O))).value -
               legendre_q(0, 0, angular_arg(p.frame(Frame::Primed))).value;
    for (int j = 0; j < m; ++j)
        L = 2.0 * j / g.rho * L +
            double_factorial(2 * j - 1) * std::pow(g.rho, j - 1) * (g.u / std::pow(g.r, 2 * j) - g.up / std::pow(g.rp, 2 * j));
    return L;
}

bool recurrence_minus_m_region(const Geo& g)
{
    return g.rho > 0.0 && g.z > 0.0 && g.z < 1.0;
}

// L_{-m}^m for seeding the forward recurrence: order raising inside the
// segment's slab, the stable spheroidal form elsewhere.
double seed_minus_m(int m, const Geo& g)
{
    if (m == 0)
        return l0_closed(g);
    if (g.rho == 0.0)
        return 0.0;
    if (recurrence_minus_m_region(g))
        return recurrence_minus_m_profile(m, g);
    return stable_minus_m_profile(m, g, nullptr);
}

// Forward chain of order m up to degree n_max, using the diagonal value
// L_{m-1}^{m-1} from the chain below.
std::vector<double> forward_chain(int m, int n_max, const Geo& g, double diag_below)
{
    std::vector<double> L(static_cast<std::size_t>(std::max(n_max + m + 1, 0)));
    if (L.empty())
        return L;
    auto at = [&](int k) -> double& { return L[static_cast<std::size_t>(k + m)]; };
    at(-m) = seed_minus_m(m, g);
    for (int n = -m; n < n_max; ++n) {
        if (n == -m)
            at(n + 1) = first_step(m, g, at(n));
        else if (n == m - 1)
            at(n + 1) = triangular_step(m, g, at(n), diag_below);
        else
            at(n + 1) = generic_step(n, m, g, at(n - 1), at(n));
    }
    return L;
}

std::vector<double> forward_all(int m, int n_max, const Geo& g)
{
    double diag = 0.0;
    for (int j = 0; j < m; ++j) {
        if (j == 0) {
            diag = l0_closed(g);
            continue;
        }
        diag = forward_chain(j, j, g, diag).back();
    }
    return forward_chain(m, n_max, g, diag);
}

// Running first-order error bounds for a forward chain: each step carries
// the bounds of its inputs through the recurrence plus its own rounding.
std::vector<double> forward_bounds(int m, const Geo& g, const std::vector<double>& L)
{
    std::vector<double> e(L.size());
    if (L.empty())
        return e;
    auto at = [&](int k) { return L[static_cast<std::size_t>(k + m)]; };
    auto err = [&](int k) -> double& { return e[static_cast<std::size_t>(k + m)]; };
    const int n_max = static_cast<int>(L.size()) - m - 1;
    err(-m) = 8 * kEps * (m + 1) * std::fabs(at(-m));
    for (int n = -m; n < n_max; ++n) {
        const double next = at(n + 1);
        if (n == -m) {
            const double a = g.z * at(n);
            err(n + 1) = std::fabs(g.z) * err(n) + 4 * kEps * (std::fabs(a) + std::fabs(next - a));
        } else if (n == m - 1) {
            const double a = g.z * at(n);
            const double rest = std::fabs(next - a);
            err(n + 1) = std::fabs(g.z) * err(n) + 8 * kEps * (m + 1) * rest + 4 * kEps * std::fabs(a);
        } else {
            const double a = (2 * n + 1) * g.z * at(n), b = (n + m) * g.r * g.r * at(n - 1);
            const double d = lrec_source(m, g), w = n - m + 1;
            err(n + 1) = ((2 * n + 1) * std::fabs(g.z) * err(n) + (n + m) * g.r * g.r * err(n - 1) +
                          4 * kEps * (std::fabs(a) + std::fabs(b) + std::fabs(d))) / std::fabs(w);
        }
    }
    return e;
}

struct BackwardOut {
    std::vector<double> values;
    double ratio, ratio_change;
    int padding;
};

BackwardOut backward_chain(int m, int n_max, const Geo& g, const RecurrenceOptions& opt)
{
    const double ref = m == 0 ? l0_closed(g) : stable_minus_m_profile(m, g, nullptr);
    const double src = lrec_source(m, g);
    const double smm = s_mm_primed(m, g);
    const double r2 = g.r * g.r;
    BackwardOut out{std::vector<double>(static_cast<std::size_t>(n_max + m + 1), 0.0), 1.0, 0.0, opt.padding};
    if (smm == 0.0 && ref == 0.0)
        return out;
    double prev_ratio = std::numeric_limits<double>::quiet_NaN();
    for (int pad = std::max(opt.padding, 1);; pad *= 2) {
        const int N = n_max + pad;
        double next = smm / (N + m + 2); // L_{N+1}
        double cur = smm / (N + m + 1);  // L_N
        std::vector<double> vals(out.values.size());
        if (N <= n_max)
            vals[static_cast<std::size_t>(N + m)] = cur;
        for (int n = N; n > -m; --n) {
            const double lower = ((2 * n + 1) * g.z * cur - (n - m + 1) * next + src) / ((n + m) * r2);
            next = cur;
            cur = lower;
            if (n - 1 <= n_max)
                vals[static_cast<std::size_t>(n - 1 + m)] = cur;
        }
        const double ratio = ref / cur;
        const double change = std::fabs(ratio - prev_ratio);
        if (change <= 1e-13 * std::fabs(ratio) || 2 * pad > opt.max_padding) {
            for (double& v : vals)
                v *= ratio;
            out.values = std::move(vals);
            out.ratio = ratio;
            out.ratio_change = std::isfinite(change) ? change : std::fabs(ratio - 1.0);
            out.padding = pad;
            return out;
        }
        prev_ratio = ratio;
    }
}

EvalResult finish(double profile, int m, const FieldPoint& p, Method method, double err, int terms)
{
    return with_phase(profile, m, p.phi(), method, err, terms);
}

double negative_degree_closed_profile(int N, const Geo& g)
{
    const double X = g.X, E = g.E;
    const double lg = std::log((X + E) * (X + E) / g.X2m1);
    const FieldPoint& p = *g.p;
    const DegreeSeries pk = legendre_p_column(N - 1, 0, angular_arg(p.frame(Frame::O)));
    const double s = pk[N - 1] / std::pow(g.r, N);
    const double om = g.omE2;
    switch (N) {
    case 1: return s * lg;
    case 2: return s * lg - 4 * om / std::pow(X + E, 3);
    case 3: return s * lg - 2 * (7 + E * E + 8 * E * X) * om / std::pow(X + E, 5);
    case 4:
        return s * lg - 4.0 / 3.0 * om / std::pow(X + E, 7) *
                            (37 - 2 * E * E + std::pow(E, 4) + 9 * E * (7 + E * E) * X + 9 * (5 * E * E - 1) * X * X);
    default: fail(ErrorKind::UnsupportedIndex, "closed negative-degree forms cover n = -1 .. -4");
    }
}

} // namespace

LogopoleSpec LogopoleSpec::of(int n, int m)
{
    if (m >= 0 && n >= -m)
        return {n, m, Family::Standard};
    if (m == 0 && n < 0)
        return {n, m, Family::NegativeDegree};
    if (m < 0 && n >= -m)
        return {n, m, Family::NegativeOrder};
    fail(ErrorKind::UnsupportedIndex, "(n, m) = (" + std::to_string(n) + ", " + std::to_string(m) +
                                          ") is outside the supported logopole families");
}

EvalResult logopole_series_multipole(int n, int m, const FieldPoint& p, const MethodPolicy& policy)
{
    require_standard(n, m);
    require_outside_tube(p, policy.tube);
    const Geo g = geo(p);
    if (!(g.r > 1.0))
        fail(ErrorKind::DivergentRegion, "multipole series needs r > R");
    const SeriesOut s = harmonic_series(m, g.r, g.u, g.rho, [n](int k) { return 1.0 / (n + k + 1); }, policy,
                                        "multipole series");
    return finish(s.value, m, p, Method::MultipoleSeries, s.err, s.terms);
}

EvalResult logopole_offset_series(int n, int m, const FieldPoint& p, const MethodPolicy& policy)
{
    require_standard(n, m);
    require_outside_tube(p, policy.tube);
    const Geo g = geo(p);
    if (!(g.rp > 1.0))
        fail(ErrorKind::DivergentRegion, "offset series needs r' > R");
    // c_m = 1/(n+m+1), c_{k+1} = -c_k (k-m+1)/(n+k+2).
    double c = 1.0 / (n + m + 1);
    int last = m;
    auto coef = [&](int k) {
        while (last < k) {
            c *= -static_cast<double>(last - m + 1) / (n + last + 2);
            ++last;
        }
        return c;
    };
    const SeriesOut s = harmonic_series(m, g.rp, g.up, g.rho, coef, policy, "offset series");
    return finish(s.value, m, p, Method::OffsetSeries, s.err, s.terms);
}

EvalResult logopole_sum_second_kind(int n, int m, const FieldPoint& p)
{
    require_standard(n, m);
    if (p.rho() == 0.0)
        fail(ErrorKind::AxisSingularity, "second-kind sum is singular on the z-axis");
    const Geo g = geo(p);
    const LegendreArg ao = angular_arg(p.frame(Frame::O));
    const DegreeSeries qp = legendre_q_column(n, m, angular_arg(p.frame(Frame::Primed)));
    const double head = std::pow(g.r, n) * legendre_q(n, m, ao).value;
    // Q_k^m from the degree recurrence carries a relative error growing with k.
    CompensatedSum images;
    double err = 8 * kEps * (n + m + 2) * std::fabs(head);
    for (int k = -m; k <= n; ++k) {
        const double t = binomial(n + m, k + m) * std::pow(g.rp, k) * qp[k];
        images.add(t);
        err += 8 * kEps * (k + m + 2) * std::fabs(t);
    }
    const double v = head - images.value();
    return finish(v, m, p, Method::SecondKindSum, err, n + m + 2);
}

bool has_closed_form(int n, int m)
{
    return (n == 0 && m == 0) || (m == 1 && n >= -1 && n <= 1) || (m == 2 && (n == -2 || n == 0 || n == 1));
}

EvalResult logopole_closed_low_order(int n, int m, const FieldPoint& p)
{
    if (!has_closed_form(n, m))
        fail(ErrorKind::UnsupportedIndex, "no closed form for this (n, m)");
    require_outside_tube(p, 0.0);
    const Geo g = geo(p);
    const double X = g.X, E = g.E;
    const double ratio = g.omE2 / g.X2m1; // (1 - E^2)/(X^2 - 1)
    double v = 0.0;
    if (m == 0) {
        v = l0_closed(g);
    } else if (m == 1) {
        const double l01 = 2.0 / (X - E) * std::sqrt(ratio);
        if (n == -1)
            v = 4.0 * std::sqrt(g.omE2) * X / (std::sqrt(g.X2m1) * (X - E) * (X + E));
        else if (n == 0)
            v = l01;
        else
            v = l01 + legendre_q(1, 1, xi_arg(p.offset())).value * std::sqrt(g.omE2);
    } else if (n == -2) {
        const double B = (X - E) * (X + E);
        v = -8.0 * ratio * (3 * E * E * X + g.omE2 * X * X * X - 3 * std::pow(X, 5)) / (B * B * B);
    } else if (n == 0) {
        v = 4.0 * (2 * X * X - 1 - X * E) / std::pow(X - E, 3) * ratio;
    } else {
        v = 2.0 * (3 * X * X - 2 - E * E) / std::pow(X - E, 3) * ratio;
    }
    return finish(v, m, p, Method::ClosedForm, 16 * kEps * std::fabs(v), 1);
}

EvalResult logopole_minus_m(int m, const FieldPoint& p, MinusMMode mode)
{
    if (m < 0)
        fail(ErrorKind::UnsupportedIndex, "L_{-m}^m needs m >= 0");
    require_outside_tube(p, 0.0);
    const Geo g = geo(p);
    switch (mode) {
    case MinusMMode::Stable: {
        double cond = 1.0;
        const double v = stable_minus_m_profile(m, g, &cond);
        return finish(v, m, p, Method::StableMinusM, 4 * kEps * (m + 1) * cond * std::fabs(v), m * (m + 1) / 2);
    }
    case MinusMMode::Naive: {
        if (m == 0) {
            const double v = legendre_q(0, 0, angular_arg(p.frame(Frame::O))).value -
                             legendre_q(0, 0, angular_arg(p.frame(Frame::Primed))).value;
            return finish(v, 0, p, Method::NaiveMinusM, 4 * kEps * std::fabs(v), 2);
        }
        if (g.rho == 0.0)
            return finish(0.0, m, p, Method::NaiveMinusM, 0.0, 0);
        const double a = minus_m_poly(m, g.u), b = minus_m_poly(m, g.up);
        const double scale = std::pow(g.rho, -m);
        const double v = (a - b) * scale;
        return finish(v, m, p, Method::NaiveMinusM, 4 * kEps * m * (std::fabs(a) + std::fabs(b)) * scale, 2 * m);
    }
    case MinusMMode::RecurrenceM: {
        if (!recurrence_minus_m_region(g))
            fail(ErrorKind::RegionViolation, "order raising for L_{-m}^m is restricted to rho > 0, 0 < z < R");
        const double v = recurrence_minus_m_profile(m, g);
        return finish(v, m, p, Method::RecurrenceMinusM, 4 * kEps * (m + 1) * std::fabs(v), m + 1);
    }
    }
    fail(ErrorKind::InvalidArgument, "unknown mode");
}

double lrec_forward_step(int n, int m, const FieldPoint& p, double l_prev, double l_cur)
{
    require_standard(n, m);
    const Geo g = geo(p);
    if (n == -m)
        return first_step(m, g, l_cur);
    if (n == m - 1)
        fail(ErrorKind::PoleDivision, "generic degree step divides by zero at n = m - 1; use the triangular step");
    return generic_step(n, m, g, l_prev, l_cur);
}

double lrec_residual(int n, int m, const FieldPoint& p, double l_prev, double l_cur, double l_next)
{
    const Geo g = geo(p);
    const double a = (n - m + 1) * l_next, b = (2 * n + 1) * g.z * l_cur, c = (n + m) * g.r * g.r * l_prev;
    const double d = lrec_source(m, g);
    const double scale = std::fabs(a) + std::fabs(b) + std::fabs(c) + std::fabs(d);
    return scale == 0.0 ? 0.0 : std::fabs(a - b + c - d) / scale;
}

std::vector<EvalResult> logopole_recurrence_n(int m, int n_max, const FieldPoint& p, Direction direction,
                                              const RecurrenceOptions& options)
{
    if (m < 0)
        fail(ErrorKind::UnsupportedIndex, "degree recurrence needs m >= 0");
    if (n_max < -m)
        fail(ErrorKind::InvalidDegree, "n_max must be at least -m");
    require_outside_tube(p, 0.0);
    const Geo g = geo(p);
    std::vector<EvalResult> out;
    if (direction == Direction::Forward) {
        if (!(g.r < 1.0) && !options.allow_unstable)
            fail(ErrorKind::RegionViolation, "forward degree recurrence is stable only for r < R");
        const std::vector<double> L = forward_all(m, n_max, g);
        const std::vector<double> e = forward_bounds(m, g, L);
        for (int k = -m; k <= n_max; ++k) {
            const auto i = static_cast<std::size_t>(k + m);
            const double v = L[i];
            out.push_back(finish(v, m, p, Method::ForwardRecurrence, std::max(e[i], 8 * kEps * (k + m + 1) * std::fabs(v)), k + m + 1));
        }
        return out;
    }
    if (!(g.r > 1.0) && !options.allow_unstable)
        fail(ErrorKind::RegionViolation, "backward degree recurrence is stable only for r > R");
    const BackwardOut b = backward_chain(m, n_max, g, options);
    const int steps = n_max + b.padding + m;
    for (int k = -m; k <= n_max; ++k) {
        const double v = b.values[static_cast<std::size_t>(k + m)];
        const double err = (b.ratio_change / std::max(std::fabs(b.ratio), 1e-300) + 8 * kEps * (n_max - k + 1)) * std::fabs(v);
        out.push_back(finish(v, m, p, Method::BackwardRecurrence, err, steps));
    }
    return out;
}

double logopole_axis(int n, double z_hat)
{
    if (n < 0)
        fail(ErrorKind::InvalidDegree, "axis formula needs n >= 0");
    if (!(z_hat > 1.0))
        fail(ErrorKind::DomainError, "axis formula needs z > R");
    CompensatedSum s;
    const double q = 1.0 / z_hat;
    double w = 1.0;
    for (int j = 1; j < 50000000; ++j) {
        w *= q;
        const double t = w / (n + j);
        s.add(t);
        if (t <= 1e-17 * s.value() * (1.0 - q))
            return s.value();
    }
    fail(ErrorKind::NonConvergence, "axis series did not converge");
}

double logopole_axis_closed(int n, double z_hat)
{
    if (n < 0)
        fail(ErrorKind::InvalidDegree, "axis formula needs n >= 0");
    if (!(z_hat > 1.0))
        fail(ErrorKind::DomainError, "axis formula needs z > R");
    double s = std::log(z_hat / (z_hat - 1.0));
    for (int k = 1; k <= n; ++k)
        s -= std::pow(z_hat, -k) / k;
    return std::pow(z_hat, n) * s;
}

double logopole_minus_one_spherical(const FieldPoint& p)
{
    const Geo g = geo(p);
    return std::log(2.0 * g.r / (g.r - g.u + g.rp)) / g.r;
}

EvalResult logopole_negative_degree_closed(int n, const FieldPoint& p)
{
    if (n >= 0)
        fail(ErrorKind::InvalidDegree, "negative-degree family needs n < 0");
    require_outside_tube(p, 0.0);
    const double v = negative_degree_closed_profile(-n, geo(p));
    return finish(v, 0, p, Method::ClosedForm, 32 * kEps * std::fabs(v) * (1 - n), 1);
}

EvalResult logopole_negative_degree_series(int n, const FieldPoint& p, const MethodPolicy& policy)
{
    if (n >= 0)
        fail(ErrorKind::InvalidDegree, "negative-degree family needs n < 0");
    require_outside_tube(p, policy.tube);
    const Geo g = geo(p);
    if (!(g.r > 1.0))
        fail(ErrorKind::DivergentRegion, "negative-degree series needs r > R");
    const int N = -n;
    // sum_{k>=N} S_k/(k-N+1): the m = 0 harmonic series with zero weight below N.
    const SeriesOut s = harmonic_series(0, g.r, g.u, g.rho, [N](int k) { return k < N ? 0.0 : 1.0 / (k - N + 1); },
                                        policy, "negative-degree series");
    return finish(s.value, 0, p, Method::MultipoleSeries, s.err, s.terms);
}

EvalResult logopole_negative_degree(int n, const FieldPoint& p, const MethodPolicy& policy)
{
    if (n >= 0)
        fail(ErrorKind::InvalidDegree, "negative-degree family needs n < 0");
    require_outside_tube(p, policy.tube);
    const int N = -n;
    const Geo g = geo(p);
    const Method route = policy.route.value_or(N <= 4 ? Method::ClosedForm
                                                      : (g.r > 1.25 ? Method::MultipoleSeries : Method::NegativeDegree));
    switch (route) {
    case Method::ClosedForm: return logopole_negative_degree_closed(n, p);
    case Method::MultipoleSeries: return logopole_negative_degree_series(n, p, policy);
    case Method::Quadrature: {
        const auto q = oracle::quad_line_negative_degree(n, p, policy.quad_tol);
        return finish(q.value, 0, p, Method::Quadrature, q.abs_error_est, q.subdivisions);
    }
    case Method::NegativeDegree: {
        // Raise the depth with the degree recurrence from L_{-1}, L_{-2}:
        // j L_{-j} = (2j+1) z L_{-j-1} - (j+1) r^2 L_{-j-2} + source_j.
        const DegreeSeries pk = legendre_p_column(N + 1, 0, angular_arg(p.frame(Frame::O)));
        auto S = [&](int k) { return pk[k] / std::pow(g.r, k + 1); };
        double a = negative_degree_closed_profile(1, g), b = negative_degree_closed_profile(2, g);
        if (N == 1)
            return finish(a, 0, p, Method::NegativeDegree, 32 * kEps * std::fabs(a), 1);
        CompensatedSum partial;
        partial.add(S(0));
        double growth = 1.0;
        for (int j = 1; j + 2 <= N; ++j) {
            partial.add(S(j));
            const double src = -g.rp + g.rp * g.rp * partial.value() + g.r * g.r * S(j + 1) - S(j);
            const double t1 = (2 * j + 1) * g.z * b, t2 = j * a;
            const double c = (t1 - t2 + src) / ((j + 1) * g.r * g.r);
            const double mag = (std::fabs(t1) + std::fabs(t2) + std::fabs(src)) / ((j + 1) * g.r * g.r);
            growth = std::max(growth, mag / std::max(std::fabs(c), 1e-300));
            a = b;
            b = c;
        }
        return finish(b, 0, p, Method::NegativeDegree, 8 * kEps * growth * N * std::fabs(b), N);
    }
    default: fail(ErrorKind::UnsupportedIndex, "route not available for the negative-degree family");
    }
}

EvalResult logopole_negative_order(int n, int m, const FieldPoint& p)
{
    if (m <= 0)
        fail(ErrorKind::UnsupportedIndex, "negative-order family takes m > 0 (order -m)");
    if (n < m)
        fail(ErrorKind::UnsupportedIndex, "negative-order family needs n >= m");
    if (p.rho() == 0.0)
        fail(ErrorKind::AxisSingularity, "negative-order logopoles are singular on the z-axis");
    const Geo g = geo(p);
    const double head = std::pow(g.r, n) * legendre_q(n, m, angular_arg(p.frame(Frame::O))).value;
    const DegreeSeries qp = legendre_q_column(n, m, angular_arg(p.frame(Frame::Primed)));
    CompensatedSum images;
    for (int k = m; k <= n; ++k)
        images.add(binomial(n + m, k + m) * std::pow(g.rp, k) * qp[k]);
    const double pre = sign_power(m) * factorial_ratio(n - m, n + m);
    const double v = pre * (head - images.value());
    const double err = 8 * kEps * std::fabs(pre) * (std::fabs(head) + images.magnitude());
    return finish(v, -m, p, Method::NegativeOrder, err, n - m + 2);
}

EvalResult logopole_separated(int n, int m, const FieldPoint& p)
{
    if (m < 0 || n < m)
        fail(ErrorKind::UnsupportedIndex, "separated form needs n >= m >= 0");
    require_outside_tube(p, 0.0);
    if (m > 0 && p.rho() == 0.0)
        fail(ErrorKind::AxisSingularity, "separated form with m > 0 is singular on the z-axis");
    const Geo g = geo(p);
    const LegendreArg ao = angular_arg(p.frame(Frame::O));
    const LegendreArg ap = angular_arg(p.frame(Frame::Primed));
    const double l0 = l0_closed(g);
    const double rn = std::pow(g.r, n);
    const double t1 = rn * legendre_p(n, m, ao) * l0;
    const double t2 = rn * w_column(n - 1, m, ao)[n - 1];
    const DegreeSeries wp = w_column(n - 1, m, ap);
    const DegreeSeries qp = m > 0 ? legendre_q_column(m - 1, m, ap) : DegreeSeries{};
    CompensatedSum sum;
    sum.add(t1);
    sum.add(-t2);
    for (int k = -m; k <= n; ++k) {
        const double w = k < m ? -qp[k] : wp[k - 1];
        sum.add(binomial(n + m, k + m) * std::pow(g.rp, k) * w);
    }
    return finish(sum.value(), m, p, Method::Separated, 8 * kEps * sum.magnitude(), n + m + 3);
}

double lrecnm_step(int n, int m, const FieldPoint& p, double l_nm1_m, double l_n_m)
{
    require_standard(n, m);
    if (n == -m)
        fail(ErrorKind::UnsupportedIndex, "order raising needs n > -m");
    if (p.rho() == 0.0)
        fail(ErrorKind::AxisSingularity, "order raising divides by sin(theta)");
    const Geo g = geo(p);
    const double s = p.frame(Frame::O).sin_theta;
    return ((n + m) * g.r * l_nm1_m - (n - m) * g.u * l_n_m + (g.u - g.r) * s_mm_primed(m, g)) / s;
}

double lrecm_step(int n, int m, const FieldPoint& p, double l_n_m, double l_n_mm1)
{
    if (m < 1)
        fail(ErrorKind::UnsupportedIndex, "this order-raising relation needs order m - 1 >= 0");
    require_standard(n, m);
    if (p.rho() == 0.0)
        fail(ErrorKind::AxisSingularity, "order raising divides by sin(theta)");
    const Geo g = geo(p);
    const FrameCoords& o = p.frame(Frame::O);
    const LegendreArg ap = angular_arg(p.frame(Frame::Primed));
    const double s1 = legendre_p(m, m - 1, ap) / std::pow(g.rp, m + 1);
    const double s0 = legendre_p(m - 1, m - 1, ap) / std::pow(g.rp, m);
    return 2.0 * m * (g.u / o.sin_theta) * l_n_m - ((n - m + 1) * (n + m) * l_n_mm1 + s1 - (n - m + 1) * s0);
}

EvalResult logopole_recurrence_m(int n, int m, const FieldPoint& p, OrderVariant variant)
{
    require_standard(n, m);
    if (p.rho() == 0.0)
        fail(ErrorKind::AxisSingularity, "order raising divides by sin(theta)");
    require_outside_tube(p, 0.0);
    double amplification = 1.0;
    auto track = [&](double value, double magnitude) {
        if (value != 0.0)
            amplification *= std::max(1.0, magnitude / std::fabs(value));
    };

    if (variant == OrderVariant::EqLrecm) {
        if (m < 2)
            fail(ErrorKind::UnsupportedIndex, "EqLrecm raising starts from orders 0 and 1 (targets m >= 2)");
        if (n < 0)
            fail(ErrorKind::UnsupportedIndex, "EqLrecm raising needs n >= 0 for the order-0 seed");
        double lo = evaluate_logopole(n, 0, make_point(p.rho(), p.z(), 0.0, p.scale())).value.real();
        double hi = evaluate_logopole(n, 1, make_point(p.rho(), p.z(), 0.0, p.scale())).value.real();
        for (int j = 1; j < m; ++j) {
            const double next = lrecm_step(n, j, p, hi, lo);
            track(next, std::fabs(2.0 * j * hi * p.frame(Frame::O).u / p.frame(Frame::O).sin_theta) +
                            std::fabs((n - j + 1) * (n + j) * lo));
            lo = hi;
            hi = next;
        }
        return finish(hi, m, p, Method::RecurrenceM, kEps * amplification * std::fabs(hi), m - 1);
    }

    // EqLrecnm: order j holds degrees lo..n; each raise consumes one degree
    // at the bottom unless the bottom is -j, where L_{-j-1}^{j+1} is injected.
    const FieldPoint p0 = make_point(p.rho(), p.z(), 0.0, p.scale());
    // For n < 0 the chain starts at order -n from L_n^{-n}.
    const int j0 = std::max(0, -n);
    int lo = n < 0 ? n : std::max(0, n - m);
    std::vector<double> cur; // index k - lo
    if (n < 0)
        cur.push_back(logopole_minus_m(j0, p0, MinusMMode::Stable).value.real());
    else
        for (int k = lo; k <= n; ++k)
            cur.push_back(evaluate_logopole(k, 0, p0).value.real());
    for (int j = j0; j < m; ++j) {
        std::vector<double> next;
        int new_lo;
        const bool bottom = lo == -j;
        if (bottom) {
            new_lo = -j - 1;
            const double seed = logopole_minus_m(j + 1, p0, MinusMMode::Stable).value.real();
            next.push_back(seed);
            // The raise does not hold at k = -j; step up in degree instead.
            if (n >= -j)
                next.push_back(first_step(j + 1, geo(p0), seed));
            for (int k = -j + 1; k <= n; ++k)
                next.push_back(lrecnm_step(k, j, p0, cur[static_cast<std::size_t>(k - 1 - lo)],
                                           cur[static_cast<std::size_t>(k - lo)]));
        } else {
            new_lo = lo + 1;
            for (int k = lo + 1; k <= n; ++k)
                next.push_back(lrecnm_step(k, j, p0, cur[static_cast<std::size_t>(k - 1 - lo)],
                                           cur[static_cast<std::size_t>(k - lo)]));
        }
        const double top = next.back();
        const Geo g = geo(p0);
        const double s = p0.frame(Frame::O).sin_theta;
        const double mag = (std::fabs((n + j) * g.r * cur[static_cast<std::size_t>(std::max(n - 1 - lo, 0))]) +
                            std::fabs((n - j) * g.u * cur.back())) / s;
        track(top, mag);
        cur = std::move(next);
        lo = new_lo;
    }
    const double v = cur.back();
    return finish(v, m, p, Method::RecurrenceM, kEps * amplification * std::fabs(v), m);
}

Method auto_route(int n, int m, const FieldPoint& p, const MethodPolicy& policy)
{
    const LogopoleSpec spec = LogopoleSpec::of(n, m);
    if (spec.family == Family::NegativeDegree)
        return -n <= 4 ? Method::ClosedForm : (geo(p).r > 1.25 ? Method::MultipoleSeries : Method::NegativeDegree);
    if (spec.family == Family::NegativeOrder)
        return Method::NegativeOrder;
    const Geo g = geo(p);
    if (n == -m)
        return m == 0 ? Method::ClosedForm : Method::StableMinusM;
    if (on_axis_outside(g) && (m > 0 || g.z > 1.0))
        return Method::AxisFormula;
    if (has_closed_form(n, m))
        return Method::ClosedForm;
    if (g.r < 0.95)
        return Method::ForwardRecurrence;
    if (g.r > 1.05)
        return Method::BackwardRecurrence;
    if (g.rp > 1.25)
        return Method::OffsetSeries;
    if (n <= 8 && g.rho > 0.0)
        return Method::SecondKindSum;
    (void)policy;
    return g.r < 1.0 ? Method::ForwardRecurrence : Method::BackwardRecurrence;
}

EvalResult evaluate_logopole(int n, int m, const FieldPoint& p, const MethodPolicy& policy)
{
    const LogopoleSpec spec = LogopoleSpec::of(n, m);
    require_outside_tube(p, policy.tube);
    if (spec.family == Family::NegativeDegree)
        return logopole_negative_degree(n, p, policy);
    if (spec.family == Family::NegativeOrder) {
        const Method route = policy.route.value_or(Method::NegativeOrder);
        if (route != Method::NegativeOrder && route != Method::SecondKindSum)
            fail(ErrorKind::UnsupportedIndex, "negative-order logopoles are evaluated by their second-kind sum");
        return logopole_negative_order(n, -m, p);
    }

    const Method route = policy.route ? *policy.route : auto_route(n, m, p, policy);
    RecurrenceOptions ropt;
    ropt.padding = policy.padding;
    ropt.allow_unstable = policy.allow_unstable;
    switch (route) {
    case Method::MultipoleSeries: return logopole_series_multipole(n, m, p, policy);
    case Method::OffsetSeries: return logopole_offset_series(n, m, p, policy);
    case Method::SecondKindSum: return logopole_sum_second_kind(n, m, p);
    case Method::ClosedForm: return logopole_closed_low_order(n, m, p);
    case Method::Separated: return logopole_separated(n, m, p);
    case Method::StableMinusM:
    case Method::NaiveMinusM:
    case Method::RecurrenceMinusM: {
        if (n != -m)
            fail(ErrorKind::UnsupportedIndex, "this route evaluates L_{-m}^m only");
        const MinusMMode mode = route == Method::StableMinusM  ? MinusMMode::Stable
                                : route == Method::NaiveMinusM ? MinusMMode::Naive
                                                               : MinusMMode::RecurrenceM;
        return logopole_minus_m(m, p, mode);
    }
    case Method::ForwardRecurrence:
    case Method::BackwardRecurrence: {
        const Direction d = route == Method::ForwardRecurrence ? Direction::Forward : Direction::Backward;
        return logopole_recurrence_n(m, n, p, d, ropt).back();
    }
    case Method::AxisFormula: {
        const Geo g = geo(p);
        if (!on_axis_outside(g))
            fail(ErrorKind::RegionViolation, "axis formula needs rho = 0 outside the segment");
        if (m > 0)
            return finish(0.0, m, p, Method::AxisFormula, 0.0, 0);
        const double v = logopole_axis(n, g.z);
        return finish(v, 0, p, Method::AxisFormula, 4 * kEps * std::fabs(v), 1);
    }
    case Method::RecurrenceM: return logopole_recurrence_m(n, m, p, OrderVariant::EqLrecnm);
    case Method::Quadrature: {
        const auto q = oracle::quad_line_multipole(oracle::Density::monomial(n), m, p, policy.quad_tol);
        return finish(q.value, m, p, Method::Quadrature, q.abs_error_est, q.subdivisions);
    }
    default: fail(ErrorKind::UnsupportedIndex, std::string("route ") + std::string(to_string(route)) +
                                                   " does not evaluate standard logopoles");
    }
}

} // namespace logopole
