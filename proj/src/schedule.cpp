#include "lepbal/schedule.hpp"

#include <cmath>

#include "lepbal/errors.hpp"
#include "lepbal/noise.hpp"

namespace lepbal {

namespace {

void check_omegas(double omega0, double omega) {
    if (!(omega0 > 1.0)) throw ConstraintViolation("omega0 > 1");
    if (!(omega > 1.0)) throw ConstraintViolation("omega > 1");
    if (!(omega0 * omega > omega0 + 1.0)) throw ConstraintViolation("omega0*omega > omega0 + 1");
}

}  // namespace

Grid make_grid(double omega0, double omega, long k_max) {
    check_omegas(omega0, omega);
    if (k_max <= 0) throw DegenerateDimension();
    Grid grid;
    grid.omega0 = omega0;
    grid.omega = omega;
    grid.k_max = k_max;
    double x = omega0;
    while (true) {
        const long s = static_cast<long>(std::ceil(x));
        if (s > k_max) break;
        grid.levels.push_back(s);
        x *= omega;
    }
    if (grid.levels.empty())
        throw GridTooCoarse("s(0) = " + std::to_string(static_cast<long>(std::ceil(omega0))) +
                            " exceeds k_max = " + std::to_string(k_max));
    grid.n_max = static_cast<int>(grid.levels.size()) - 1;
    return grid;
}

Grid make_grid(const ModelParams& params, long k_max) {
    return make_grid(params.omega0, params.omega, k_max);
}

long cutoff(const Grid& grid, int n) {
    if (n < 0 || n > grid.n_max)
        throw LevelOutOfRange("level " + std::to_string(n) + " outside [0, " +
                              std::to_string(grid.n_max) + "]");
    return grid.levels[static_cast<std::size_t>(n)];
}

int max_level(double omega0, double omega, long k_max) {
    return make_grid(omega0, omega, k_max).n_max;
}

int lookahead(const Grid& grid, int n, double sigma, const NoiseBehavior& rho) {
    if (n < 0 || n > grid.n_max)
        throw LevelOutOfRange("lookahead level " + std::to_string(n));
    const double threshold = sigma * rho(n);
    for (int m = n + 1; m <= grid.n_max; ++m) {
        if (rho(m) > threshold) return m;
    }
    return grid.n_max;
}

double lookahead_gap_estimate(double sigma, double omega) {
    return std::log(sigma) / std::log(omega);
}

}  // namespace lepbal
