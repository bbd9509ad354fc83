#pragma once

#include <cmath>
#include <cstddef>

namespace logopole {

inline constexpr int kFactorialTableSize = 401;

// n! for 0 <= n <= 400; values beyond 170 are +inf.
double factorial(int n);

// k!! with the odd negative extension (k-2)!! = k!!/k, so (-1)!! = 1 and
// (-3)!! = -1. Even negative arguments are rejected.
double double_factorial(int k);

// a!/b! for a, b >= 0, computed as a product so it stays finite when the
// individual factorials overflow.
double factorial_ratio(int a, int b);

// Binomial coefficient C(n, k) for integer n >= 0; zero outside 0 <= k <= n.
double binomial(int n, int k);

inline double sign_power(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        abs_ += std::fabs(x);
    }
    double value() const { return sum_ + comp_; }
    // Sum of magnitudes, for a-posteriori cancellation estimates.
    double magnitude() const { return abs_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double abs_ = 0.0;
};

} // namespace logopole
