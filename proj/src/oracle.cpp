#include "logopole/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "logopole/errors.hpp"
#include "logopole/legendre.hpp"
#include "logopole/numerics.hpp"

namespace logopole::oracle {

namespace {

// Kronrod abscissae and weights (descending abscissae, last one is the centre);
// the Gauss 7-point rule uses every second abscissa starting at index 1.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value, error, resabs;
};

Panel gk15(const std::function<double(double)>& f, double a, double b)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::fabs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(centre - dx);
        fv2[j] = f(centre + dx);
        const double s = fv1[j] + fv2[j];
        resk += kWgk[j] * s;
        resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
        if (j % 2 == 1)
            resg += kWg[j / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));

    const double ah = std::fabs(half);
    Panel p{a, b, resk * half, std::fabs((resk - resg) * half), resabs * ah};
    resasc *= ah;
    if (resasc != 0.0 && p.error != 0.0)
        p.error = resasc * std::min(1.0, std::pow(200.0 * p.error / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (p.resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        p.error = std::max(50.0 * eps * p.resabs, p.error);
    if (!std::isfinite(p.value))
        p.error = std::numeric_limits<double>::infinity();
    return p;
}

// (2m-1)!! rho^m / (rho^2 + w^2)^{m+1/2}, the meridional profile of an axial
// order-m multipole at axial distance w, written to avoid under/overflow.
double multipole_kernel(int m, double dfact, double rho, double w)
{
    const double d = std::hypot(rho, w);
    return dfact * std::pow(rho / d, m) / std::pow(d, m + 1);
}

void require_tol(double tol)
{
    if (!(tol >= 1e-13) || !(tol < 1.0))
        fail(ErrorKind::InvalidArgument, "quadrature tolerance must lie in [1e-13, 1)");
}

QuadResult checked(const QuadResult& q, const std::string& what)
{
    if (!q.converged)
        throw Error(ErrorKind::NoConvergence, what + ": quadrature did not converge", q.value);
    return q;
}

// Sum of a series whose terms decay geometrically; throws when the tail bound
// is not reached within the term budget.
template <class Term>
double geometric_series(Term term, int first, int step, int budget, const std::string& what)
{
    CompensatedSum sum;
    int small = 0;
    for (int j = first, count = 0; count < budget; j += step, ++count) {
        const double t = term(j);
        sum.add(t);
        if (std::fabs(t) <= 1e-18 * std::fabs(sum.value())) {
            if (++small >= 3)
                return sum.value();
        } else {
            small = 0;
        }
    }
    fail(ErrorKind::TailTooLarge, what + ": analytic tail did not converge");
}

struct SecondKindSetup {
    int n, m;
    double dfact, rho, z, r;
    DegreeSeries p; // P_j^m(u)
    std::vector<int> regs;

    double regular(int k) const { return std::pow(r, k) * p[k]; }      // r^k P_k^m(u)
    double exterior(int k) const { return p[k] / std::pow(r, k + 1); } // r^{-k-1} P_k^m(u)
    double s(double w) const { return multipole_kernel(m, dfact, rho, w); }
};

SecondKindSetup second_kind_setup(int n, int m, const FieldPoint& p, int j_max)
{
    if (m < 0 || n < -m)
        fail(ErrorKind::InvalidDegree, "second-kind harmonic needs m >= 0 and n >= -m");
    if (p.rho() == 0.0)
        fail(ErrorKind::AxisSingularity, "second-kind harmonic is singular on the z-axis");
    SecondKindSetup s{n, m, double_factorial(2 * m - 1), p.rho_hat(), p.z_hat(), p.frame(Frame::O).r, {}, {}};
    s.p = legendre_p_column(j_max, m, angular_arg(p.frame(Frame::O)));
    for (int k = m; k <= n - 1; ++k)
        if ((n - k) % 2 == 1)
            s.regs.push_back(k);
    return s;
}

// Odd-parity start index: smallest j >= lo with j - n odd.
int odd_from(int lo, int n)
{
    return ((lo - n) % 2 == 0) ? lo + 1 : lo;
}

constexpr int kTailBudget = 400;

double interior_tail(const SecondKindSetup& s, double V)
{
    const int first = odd_from(std::max(s.m, s.n + 1), s.n);
    return geometric_series(
        [&](int j) { return std::pow(s.r / V, j) * s.p[j] * std::pow(V, s.n) / (j - s.n); }, first, 2,
        kTailBudget, "interior second kind");
}

// 1/2 int_V^inf of the unregularised exterior pair integrand.
double exterior_far_tail(const SecondKindSetup& s, double V)
{
    const int first = odd_from(s.m, s.n);
    return geometric_series(
        [&](int j) { return std::pow(s.r / V, j) * s.p[j] / (std::pow(V, s.n + 1) * (s.n + j + 1)); }, first, 2,
        kTailBudget, "exterior second kind");
}

int tail_degree(int n, int m)
{
    return std::max(n, m) + 2 * kTailBudget + 2;
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const std::vector<double>& breakpoints, const QuadOptions& opt)
{
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a};
    std::vector<double> bp = breakpoints;
    std::sort(bp.begin(), bp.end());
    for (double c : bp)
        if (c > a && c < b && c > cuts.back())
            cuts.push_back(c);
    cuts.push_back(b);

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        panels.push_back(gk15(f, cuts[i], cuts[i + 1]));

    auto totals = [&](double& value, double& error, double& resabs) {
        CompensatedSum v, e, ra;
        for (const Panel& p : panels) {
            v.add(p.value);
            e.add(p.error);
            ra.add(p.resabs);
        }
        value = v.value();
        error = e.value();
        resabs = ra.value();
    };

    double value = 0.0, error = 0.0, resabs = 0.0;
    totals(value, error, resabs);
    int subdivisions = 0;
    auto target = [&]() {
        // Relative to the result, with a floor relative to int|f| so that
        // integrals that cancel to (nearly) zero can still terminate.
        return std::max({opt.abs_tol, opt.rel_tol * std::fabs(value), 1e-2 * opt.rel_tol * resabs});
    };
    while (!(error <= target()) && subdivisions < opt.max_subdivisions) {
        auto worst = std::max_element(panels.begin(), panels.end(),
                                      [](const Panel& x, const Panel& y) { return x.error < y.error; });
        const double mid = 0.5 * (worst->a + worst->b);
        if (!(mid > worst->a && mid < worst->b))
            break;
        const Panel left = gk15(f, worst->a, mid);
        const Panel right = gk15(f, mid, worst->b);
        *worst = left;
        panels.push_back(right);
        ++subdivisions;
        totals(value, error, resabs);
    }

    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    totals(value, error, resabs);
    out.value = sign * value;
    out.abs_error_est = error;
    out.subdivisions = subdivisions;
    out.converged = std::isfinite(value) && error <= target();
    return out;
}

QuadResult quad_line_multipole(const Density& density, int m, const FieldPoint& p, double tol)
{
    require_tol(tol);
    if (m < 0)
        fail(ErrorKind::InvalidDegree, "multipole order must be non-negative");
    const double dfact = double_factorial(2 * m - 1);
    QuadOptions opt;
    opt.rel_tol = tol;

    if (density.kind == Density::Kind::Monomial) {
        const int power = density.n + m;
        if (power < 0)
            fail(ErrorKind::InvalidDegree, "monomial density needs n >= -m");
        if (singular_distance(p) <= 0.0)
            fail(ErrorKind::FocalSegmentSingularity, "point lies on the source segment");
        const double rho = p.rho_hat(), z = p.z_hat();
        auto f = [=](double v) { return std::pow(v, power) * multipole_kernel(m, dfact, rho, z - v); };
        return checked(integrate(f, 0.0, 1.0, {std::clamp(z, 0.0, 1.0)}, opt), "line multipole");
    }

    const int n = density.n;
    if (n < 0)
        fail(ErrorKind::InvalidDegree, "Legendre-weighted density needs n >= 0");
    // Work in units of the half focal length with the focal segment at [-1, 1].
    double rho = p.rho_hat(), z = p.z_hat();
    if (density.focal == Focal::Offset) {
        rho *= 2.0;
        z = 2.0 * z - 1.0;
    }
    if (rho == 0.0 && std::fabs(z) <= 1.0)
        fail(ErrorKind::FocalSegmentSingularity, "point lies on the focal segment");
    const double pre = 0.5 * sign_power(m);
    auto f = [=](double v) {
        const double w = std::pow((1.0 - v) * (1.0 + v), 0.5 * m) * legendre_p(n, m, v);
        return pre * w * multipole_kernel(m, dfact, rho, z - v);
    };
    return checked(integrate(f, -1.0, 1.0, {std::clamp(z, -1.0, 1.0)}, opt), "Legendre-weighted line");
}

QuadResult quad_line_negative_degree(int n, const FieldPoint& p, double tol)
{
    require_tol(tol);
    if (n >= 0)
        fail(ErrorKind::InvalidDegree, "negative-degree oracle needs n < 0");
    if (singular_distance(p) <= 0.0)
        fail(ErrorKind::FocalSegmentSingularity, "point lies on the source segment");
    const int N = -n;
    const FrameCoords& o = p.frame(Frame::O);
    const double r = o.r, rho = p.rho_hat(), z = p.z_hat();
    const DegreeSeries pk = legendre_p_column(N + kTailBudget, 0, angular_arg(o));

    // Below delta the integrand is summed termwise: delta^{k-N+1} S_k/(k-N+1).
    const double delta = std::min(0.5 * r, 1.0);
    const double head = geometric_series(
        [&](int k) { return std::pow(delta / r, k) * pk[k] * std::pow(delta, 1 - N) / (r * (k - N + 1)); }, N,
        1, kTailBudget, "negative-degree head");

    QuadResult q;
    q.converged = true;
    if (delta < 1.0) {
        std::vector<double> sk(static_cast<std::size_t>(N));
        for (int k = 0; k < N; ++k)
            sk[static_cast<std::size_t>(k)] = pk[k] / std::pow(r, k + 1);
        auto f = [&](double v) {
            double reg = 0.0, vk = 1.0;
            for (int k = 0; k < N; ++k, vk *= v)
                reg += vk * sk[static_cast<std::size_t>(k)];
            return (1.0 / std::hypot(rho, z - v) - reg) / std::pow(v, N);
        };
        QuadOptions opt;
        opt.rel_tol = tol;
        opt.abs_tol = 1e-2 * tol * std::fabs(head);
        q = checked(integrate(f, delta, 1.0, {std::clamp(z, delta, 1.0)}, opt), "negative-degree line");
    }
    q.value += head;
    return q;
}

QuadResult quad_ssh_second_kind(int n, int m, const FieldPoint& p, Radial radial, double tol)
{
    require_tol(tol);
    const SecondKindSetup s = second_kind_setup(n, m, p, tail_degree(n, m));
    QuadOptions opt;
    opt.rel_tol = tol;
    const double V = 3.0 * s.r;
    const double peak = std::fabs(s.z);

    if (radial == Radial::Interior) {
        const double parity = sign_power(n + m);
        auto f = [&](double v) {
            double reg = 0.0;
            for (int k : s.regs)
                reg += std::pow(v, n - k - 1) * s.regular(k);
            return 0.5 * (std::pow(v, n + m) * (s.s(s.z - v) - parity * s.s(s.z + v)) - 2.0 * reg);
        };
        const double tail = interior_tail(s, V);
        opt.abs_tol = 1e-2 * tol * std::fabs(tail);
        QuadResult q = checked(integrate(f, 0.0, V, {peak}, opt), "interior second kind");
        q.value += tail;
        return q;
    }

    const double delta = s.r / 3.0;
    const double parity = sign_power(m - n - 1);
    auto f = [&](double v) {
        double reg = 0.0;
        for (int k : s.regs)
            reg += std::pow(v, k - n - 1) * s.exterior(k);
        return 0.5 * (std::pow(v, m - n - 1) * (s.s(s.z - v) + parity * s.s(s.z + v)) - 2.0 * reg);
    };
    const int head_first = odd_from(std::max(m, n + 1), n);
    const double head = geometric_series(
        [&](int j) { return std::pow(delta / s.r, j) * s.p[j] * std::pow(delta, -n) / (s.r * (j - n)); },
        head_first, 2, kTailBudget, "exterior second kind head");
    double tail = exterior_far_tail(s, V);
    for (int k : s.regs)
        tail -= s.exterior(k) * std::pow(V, k - n) / (n - k);
    opt.abs_tol = 1e-2 * tol * (std::fabs(head) + std::fabs(tail));
    QuadResult q = checked(integrate(f, delta, V, {peak}, opt), "exterior second kind");
    q.value += head + tail;
    return q;
}

std::vector<QuadResult> quad_ssh_second_kind_limit(int n, int m, const FieldPoint& p, Radial radial,
                                                   const std::vector<double>& mus, double tol)
{
    require_tol(tol);
    const SecondKindSetup s = second_kind_setup(n, m, p, tail_degree(n, m));
    QuadOptions opt;
    opt.rel_tol = tol;
    const double peak = std::fabs(s.z);
    std::vector<QuadResult> out;
    for (double mu : mus) {
        if (!(mu > 0.0))
            fail(ErrorKind::InvalidArgument, "cutoff must be positive");
        QuadResult q;
        if (radial == Radial::Interior) {
            const double parity = sign_power(n + m);
            auto f = [&](double v) { return 0.5 * std::pow(v, n + m) * (s.s(s.z - v) - parity * s.s(s.z + v)); };
            q = checked(integrate(f, 0.0, mu, {peak}, opt), "interior cutoff");
            for (int k : s.regs)
                q.value -= s.regular(k) * std::pow(mu, n - k) / (n - k);
        } else {
            const double parity = sign_power(m - n - 1);
            const double V = 3.0 * std::max(s.r, mu);
            auto f = [&](double v) {
                return 0.5 * std::pow(v, m - n - 1) * (s.s(s.z - v) + parity * s.s(s.z + v));
            };
            q = checked(integrate(f, mu, V, {peak}, opt), "exterior cutoff");
            q.value += exterior_far_tail(s, V);
            for (int k : s.regs)
                q.value -= s.exterior(k) * std::pow(mu, k - n) / (n - k);
        }
        out.push_back(q);
    }
    return out;
}

QuadResult quad_q_minus_m(int m, double theta, double tol)
{
    require_tol(tol);
    if (m < 1)
        fail(ErrorKind::InvalidDegree, "order must be at least 1");
    if (!(theta > 0.0 && theta < std::numbers::pi))
        fail(ErrorKind::DomainError, "theta must lie in (0, pi)");
    auto f = [m](double t) { return std::pow(std::sin(t), 2 * m - 1); };
    QuadOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-300;
    QuadResult q = checked(integrate(f, theta, 0.5 * std::numbers::pi, {}, opt), "Q_{-m}^m integral");
    const double scale = double_factorial(2 * m - 1) / std::pow(std::sin(theta), m);
    q.value *= scale;
    q.abs_error_est *= scale;
    return q;
}

} // namespace logopole::oracle
