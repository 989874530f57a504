#include "lepbal/estimator.hpp"

#include <cmath>

#include "lepbal/errors.hpp"
#include "lepbal/power_sums.hpp"

namespace lepbal {

namespace {

// Checks the level against both the grid and the instance dimension; a level
// is usable when its active range [1, s(n)) fits into 1..k_max.
long checked_cutoff(const ProblemInstance& inst, const Grid& grid, int n) {
    const long s = cutoff(grid, n);
    if (s - 1 > inst.k_max)
        throw LevelOutOfRange("cutoff " + std::to_string(s) + " exceeds k_max + 1 = " +
                              std::to_string(inst.k_max + 1));
    return s;
}

}  // namespace

Reconstruction reconstruct(const ProblemInstance& inst, const Grid& grid, int n) {
    const long s = checked_cutoff(inst, grid, n);
    Reconstruction rec;
    rec.level = n;
    rec.cutoff = s;
    rec.coeffs.assign(static_cast<std::size_t>(inst.k_max), 0.0);
    for (long k = 1; k < s; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        rec.coeffs[i] = inst.truth[i] + inst.inv_singular_value(k) * inst.noise[i];
    }
    return rec;
}

double band_diff_sq(const ProblemInstance& inst, const Grid& grid, int n, int m) {
    if (n > m) throw PreconditionViolated("band_diff_sq: n <= m required");
    const long a = checked_cutoff(inst, grid, n);
    const long b = checked_cutoff(inst, grid, m);
    double sum = 0.0;
    for (long k = a; k < b; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const double c = inst.truth[i] + inst.inv_singular_value(k) * inst.noise[i];
        sum += c * c;
    }
    return sum;
}

double diff_norm(const ProblemInstance& inst, const Grid& grid, int n, int m) {
    return std::sqrt(band_diff_sq(inst, grid, n, m));
}

double error_norm(const ProblemInstance& inst, const Grid& grid, int n) {
    const long s = checked_cutoff(inst, grid, n);
    double sum = 0.0;
    for (long k = s; k <= inst.k_max; ++k) {
        const double t = inst.truth[static_cast<std::size_t>(k - 1)];
        sum += t * t;
    }
    for (long k = 1; k < s; ++k) {
        const double c = inst.inv_singular_value(k) * inst.noise[static_cast<std::size_t>(k - 1)];
        sum += c * c;
    }
    return std::sqrt(sum);
}

double expected_error_sq(const ModelParams& params, const Grid& grid, int n) {
    const long s = cutoff(grid, n);
    const double prior = params.eta * params.eta * inverse_power_tail(2.0 * params.gamma, s);
    const double q = 2.0 * params.lambda + 2.0 * params.epsilon;
    const double noise = params.delta * params.delta * power_sum_range(q, 1, s);
    return prior + noise;
}

double expected_diff_sq(const ModelParams& params, const Grid& grid, int n, int m) {
    if (n > m) throw PreconditionViolated("expected_diff_sq: n <= m required");
    const long a = cutoff(grid, n);
    const long b = cutoff(grid, m);
    const double q = 2.0 * params.lambda + 2.0 * params.epsilon;
    return params.eta * params.eta * power_sum_range(-2.0 * params.gamma, a, b) +
           params.delta * params.delta * power_sum_range(q, a, b);
}

}  // namespace lepbal
