#pragma once

#include <functional>
#include <vector>

#include "logopole/coords.hpp"

// Reference values from adaptive quadrature of line-source representations.
// All results are meridional profiles (phi = 0).
namespace logopole::oracle {

struct QuadResult {
    double value = 0.0;
    double abs_error_est = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

struct QuadOptions {
    double rel_tol = 1e-11;
    double abs_tol = 0.0;
    int max_subdivisions = 2000;
};

// Globally adaptive 15-point Gauss-Kronrod integration over [a, b] with the
// given interior break points (e.g. where the integrand peaks). Never throws;
// check `converged`.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const std::vector<double>& breakpoints = {}, const QuadOptions& opt = {});

enum class Focal { Centred, Offset };

struct Density {
    enum class Kind { Monomial, LegendreWeighted } kind;
    int n;
    Focal focal = Focal::Centred;

    // Logopole L_n^m: line density v^{n+m} on 0 <= v <= 1.
    static Density monomial(int n) { return {Kind::Monomial, n, Focal::Offset}; }
    // Spheroidal harmonic Q_n^m(xi) P_n^m(eta): density (1-v^2)^{m/2} P_n^m(v)
    // on the focal segment of the chosen system.
    static Density legendre_weighted(int n, Focal focal = Focal::Centred) { return {Kind::LegendreWeighted, n, focal}; }
};

// Line of order-m multipoles with the given density. Throws NoConvergence.
QuadResult quad_line_multipole(const Density& density, int m, const FieldPoint& p, double tol = 1e-11);

// Negative-degree logopole L_{n}, n < 0 (m = 0): regularised line density v^n.
QuadResult quad_line_negative_degree(int n, const FieldPoint& p, double tol = 1e-11);

enum class Radial { Interior, Exterior };

// Interior: r^n Q_n^m(u); exterior: r^{-n-1} Q_n^m(u), from the regularised
// whole-axis integrands, integrated symmetrically with analytic tails.
QuadResult quad_ssh_second_kind(int n, int m, const FieldPoint& p, Radial radial, double tol = 1e-11);

// Finite-cutoff version of the same representations: interior with cutoff
// |v| <= mu, exterior with |v| >= mu. Approaches the regularised value as
// mu -> infinity (interior) or mu -> 0 (exterior).
std::vector<QuadResult> quad_ssh_second_kind_limit(int n, int m, const FieldPoint& p, Radial radial,
                                                   const std::vector<double>& mus, double tol = 1e-11);

// Q_{-m}^m(cos theta) = (2m-1)!!/sin^m(theta) * int_theta^{pi/2} sin^{2m-1}(t) dt.
QuadResult quad_q_minus_m(int m, double theta, double tol = 1e-12);

} // namespace logopole::oracle
