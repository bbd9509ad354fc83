#pragma once

#include <vector>

#include "logopole/coords.hpp"
#include "logopole/eval.hpp"

// Expansions linking logopoles with offset and centred spheroidal harmonics.
namespace logopole {

enum class ExpansionFamily { QPvsL, Beta, Centred };

struct ExpansionCoeffs {
    ExpansionFamily family = ExpansionFamily::QPvsL;
    int n = 0;
    int m = 0;
    int first = 0;                // index of coeffs[0]
    std::vector<double> coeffs;
    std::vector<bool> unstable;   // entry known to be unreliable
    std::vector<double> error;    // per-entry absolute error estimate
    double truncation_error = 0.0;

    int last() const { return first + static_cast<int>(coeffs.size()) - 1; }
    double operator[](int index) const { return coeffs.at(static_cast<std::size_t>(index - first)); }
};

// Coefficients of (1-v^2)^{m/2} P_n^m(v) in powers (v+1)^{p+m}, p = 0 .. n.
ExpansionCoeffs legendre_density_coefficients(int n, int m);

// Q_n^m(xibar) P_n^m(etabar) = sum_{p=0}^n c_p L_p^m; returns c_p.
ExpansionCoeffs pssh_offset_coefficients(int n, int m);
EvalResult pssh_offset_from_logopoles(int n, int m, const FieldPoint& p);

enum class BetaRoute { NaiveSum, ClosedM1, MinusMConjecture, QuadratureProjection };

// beta_{np}^m for p = m .. p_max in L_n^m = sum_p beta_{np}^m Q_p^m(xibar) P_p^m(etabar).
// ClosedM1 needs m = 1, MinusMConjecture n = -m. NaiveSum flags p > 20 as
// unstable and is limited to p_max <= 80.
ExpansionCoeffs beta_coefficients(int n, int m, int p_max, BetaRoute route);

// L_n^m summed from projected beta coefficients. Stops once 5 consecutive
// terms fall below 1e-14 of the partial sum; NonConvergence past p_cap.
EvalResult logopole_from_pssh_series(int n, int m, const FieldPoint& p, int p_cap = 400);

// Q_n^m(xi) P_n^{-m}(eta) e^{im phi} in the centred system.
EvalResult pssh_centred_negative_order(int n, int m, const FieldPoint& p);

// Weights w_p with Q_n^m(xi) P_n^{-m}(eta) = sum_p w_p [L_p^m(R - z) + (-1)^{n+m} L_p^m(R + z)].
ExpansionCoeffs centred_coefficients(int n, int m);
EvalResult centred_pssh_from_logopoles(int n, int m, const FieldPoint& p);

enum class DerivativeOp { Dz, RDr, DPlus };

// R d_z, r d_r or R d_+ applied to Q_n^m(xi) P_n^{-m}(eta) e^{im phi} as a
// series of centred harmonics up to degree k_max. SlowConvergence when the
// tail estimate exceeds tol relative to the sum.
EvalResult pssh_derivative_series(int n, int m, const FieldPoint& p, DerivativeOp op, int k_max,
                                  double tol = 1e-12);

} // namespace logopole
