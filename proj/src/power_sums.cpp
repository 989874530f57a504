#include "lepbal/power_sums.hpp"

#include <cmath>

#include "lepbal/errors.hpp"

namespace lepbal {

double power_sum_range(double q, long a, long b) {
    if (a < 1) throw PreconditionViolated("power_sum_range: a >= 1 required");
    double sum = 0.0;
    if (q == 0.0) return b > a ? static_cast<double>(b - a) : 0.0;
    for (long k = a; k < b; ++k) sum += std::pow(static_cast<double>(k), q);
    return sum;
}

double inverse_power_tail(double p, long start) {
    if (!(p > 1.0)) throw PreconditionViolated("inverse_power_tail: p > 1 required");
    if (start < 1) throw PreconditionViolated("inverse_power_tail: start >= 1 required");
    constexpr double rel_tol = 1e-12;
    double partial = 0.0;
    long m = start - 1;
    while (true) {
        ++m;
        partial += std::pow(static_cast<double>(m), -p);
        const double mid = static_cast<double>(m) + 0.5;
        const double remainder = std::pow(mid, 1.0 - p) / (p - 1.0);
        const double total = partial + remainder;
        const double closure_error = (p / 24.0) * std::pow(mid, -p - 1.0);
        if (m - start >= 8 && closure_error <= rel_tol * total) return total;
    }
}

}  // namespace lepbal
