#include "logopole/numerics.hpp"

#include <array>
#include <limits>

#include "logopole/errors.hpp"

namespace logopole {

namespace {

struct Tables {
    std::array<double, kFactorialTableSize> fact{};
    std::array<double, kFactorialTableSize> dfact{};

    Tables()
    {
        fact[0] = 1.0;
        for (int i = 1; i < kFactorialTableSize; ++i)
            fact[i] = fact[i - 1] * i;
        dfact[0] = 1.0;
        dfact[1] = 1.0;
        for (int i = 2; i < kFactorialTableSize; ++i)
            dfact[i] = dfact[i - 2] * i;
    }
};

const Tables& tables()
{
    static const Tables t;
    return t;
}

} // namespace

double factorial(int n)
{
    if (n < 0)
        fail(ErrorKind::InvalidArgument, "factorial of negative integer");
    if (n >= kFactorialTableSize)
        return std::numeric_limits<double>::infinity();
    return tables().fact[n];
}

double double_factorial(int k)
{
    if (k >= 0) {
        if (k >= kFactorialTableSize)
            return std::numeric_limits<double>::infinity();
        return tables().dfact[k];
    }
    if (k % 2 == 0)
        fail(ErrorKind::InvalidArgument, "double factorial of even negative integer");
    double v = 1.0;
    for (int j = -1; j > k; j -= 2)
        v /= j;
    return v;
}

double factorial_ratio(int a, int b)
{
    if (a < 0 || b < 0)
        fail(ErrorKind::InvalidArgument, "factorial ratio of negative integer");
    double v = 1.0;
    if (a >= b) {
        for (int i = b + 1; i <= a; ++i)
            v *= i;
    } else {
        for (int i = a + 1; i <= b; ++i)
            v /= i;
    }
    return v;
}

double binomial(int n, int k)
{
    if (k < 0 || k > n || n < 0)
        return 0.0;
    if (k > n - k)
        k = n - k;
    double v = 1.0;
    for (int i = 1; i <= k; ++i)
        v = v * (n - k + i) / i;
    return v;
}

} // namespace logopole
