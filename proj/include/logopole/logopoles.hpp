#pragma once

#include <optional>
#include <vector>

#include "logopole/coords.hpp"
#include "logopole/eval.hpp"

// Logopoles L_n^m: potentials of the order-m line multipole density v^{n+m}
// on the segment 0 <= z <= R. All routes return the meridional profile times
// exp(i m phi) (exp(-i|m| phi) for the negative-order family).
namespace logopole {

enum class Family {
    Standard,       // m >= 0, n >= -m
    NegativeDegree, // m = 0, n < 0
    NegativeOrder,  // m < 0, n >= |m|
};

struct LogopoleSpec {
    int n = 0;
    int m = 0;
    Family family = Family::Standard;

    // Classifies (n, m); throws UnsupportedIndex outside the three families.
    static LogopoleSpec of(int n, int m);
};

struct MethodPolicy {
    std::optional<Method> route; // empty selects automatically
    double tube = 1e-8;          // singular tube radius in units of R
    double series_tol = 1e-15;   // relative tail tolerance for series
    double quad_tol = 1e-11;     // oracle tolerance for Method::Quadrature
    int padding = 60;            // initial backward-recurrence padding
    int max_terms = 100000;
    bool allow_unstable = false; // run recurrences outside their stable region
};

// Automatic or forced evaluation. Throws SingularRegion inside the tube.
EvalResult evaluate_logopole(int n, int m, const FieldPoint& p, const MethodPolicy& policy = {});

// The route the automatic policy picks for (n, m) at p.
Method auto_route(int n, int m, const FieldPoint& p, const MethodPolicy& policy = {});

// sum_{k>=m} S_k^m/(n+k+1), r > R.
EvalResult logopole_series_multipole(int n, int m, const FieldPoint& p, const MethodPolicy& policy = {});

// S~_n^m - sum_{k=-m}^{n} C(n+m, k+m) S~_k^{m'}; off the z-axis.
EvalResult logopole_sum_second_kind(int n, int m, const FieldPoint& p);

// sum_{k>=m} (-1)^{k+m} (n+m)! (k-m)!/(n+k+1)! S_k^{m'}, r' > R.
EvalResult logopole_offset_series(int n, int m, const FieldPoint& p, const MethodPolicy& policy = {});

// Explicit offset-spheroidal forms for (n, m) in
// {(0,0), (-1,1), (0,1), (1,1), (-2,2), (0,2), (1,2)}.
bool has_closed_form(int n, int m);
EvalResult logopole_closed_low_order(int n, int m, const FieldPoint& p);

enum class MinusMMode { Naive, Stable, RecurrenceM };

// L_{-m}^m. RecurrenceM raises the order from L_0 and requires rho > 0 and
// 0 < z < R (RegionViolation otherwise).
EvalResult logopole_minus_m(int m, const FieldPoint& p, MinusMMode mode = MinusMMode::Stable);

enum class Direction { Forward, Backward };

struct RecurrenceOptions {
    int padding = 60;
    bool allow_unstable = false;
    int max_padding = 1 << 20;
};

// L_k^m for k = -m .. n_max (element k + m). Forward requires r < R and
// Backward r > R unless allow_unstable; RegionViolation otherwise.
std::vector<EvalResult> logopole_recurrence_n(int m, int n_max, const FieldPoint& p, Direction direction,
                                              const RecurrenceOptions& options = {});

// Forward step n -> n+1 by the generic three-term relation. Throws
// PoleDivision at n = m-1, where the triangular step must be used.
double lrec_forward_step(int n, int m, const FieldPoint& p, double l_prev, double l_cur);
// Relative residual of the three-term relation at degree n (n > -m).
double lrec_residual(int n, int m, const FieldPoint& p, double l_prev, double l_cur, double l_next);

// m = 0 on the axis, z > R (z_hat = z/R): sum_{k>n} z^{n-k}/k.
double logopole_axis(int n, double z_hat);
// The closed form z^n [ln(z/(z-1)) - sum_{k=1}^n z^{-k}/k]; loses precision
// rapidly with n.
double logopole_axis_closed(int n, double z_hat);

// Negative-degree family L_n, n < 0 (m = 0).
EvalResult logopole_negative_degree(int n, const FieldPoint& p, const MethodPolicy& policy = {});
// sum_{k>=|n|} S_k/(k+n+1), r > R.
EvalResult logopole_negative_degree_series(int n, const FieldPoint& p, const MethodPolicy& policy = {});
// L_{-1} .. L_{-4} in offset spheroidal form.
EvalResult logopole_negative_degree_closed(int n, const FieldPoint& p);
// L_{-1} = (R/r) log(2r/(r - R u + r')).
double logopole_minus_one_spherical(const FieldPoint& p);

// L_n^{-m} for m > 0, n >= m; carries exp(-i m phi). Off the whole z-axis.
EvalResult logopole_negative_order(int n, int m, const FieldPoint& p);

// r^n [P_n^m L_0 - W_{n-1}^m] + sum_k C(n+m, k+m) r'^k W_{k-1}^m(u'), n >= m.
EvalResult logopole_separated(int n, int m, const FieldPoint& p);

enum class OrderVariant { EqLrecm, EqLrecnm };

// One raising step in m. EqLrecnm (n > -m): L_n^{m+1} from L_{n-1}^m, L_n^m.
double lrecnm_step(int n, int m, const FieldPoint& p, double l_nm1_m, double l_n_m);
// EqLrecm (m >= 1): L_n^{m+1} from L_n^m, L_n^{m-1}.
double lrecm_step(int n, int m, const FieldPoint& p, double l_n_m, double l_n_mm1);

// L_n^m reached by repeated raising from accurate low-order seeds (order 0,
// plus order 1 for EqLrecm). Demonstrates the instability of raising m.
EvalResult logopole_recurrence_m(int n, int m, const FieldPoint& p, OrderVariant variant);

} // namespace logopole
