#pragma once

// Geometric subsampling grid s(n) = ceil(omega0 * omega^n) and the
// look-ahead window used by the balancing functional.

#include <vector>

#include "lepbal/model.hpp"

namespace lepbal {

class NoiseBehavior;

struct Grid {
    double omega0 = 0.0;
    double omega = 0.0;
    int n_max = 0;             // largest level with s(n) <= k_max
    long k_max = 0;
    std::vector<long> levels;  // s(0..n_max)
};

// Throws GridTooCoarse when s(0) > k_max; ConstraintViolation on bad omegas.
Grid make_grid(double omega0, double omega, long k_max);
Grid make_grid(const ModelParams& params, long k_max);

// s(n); always within [omega0*omega^n, (omega0+1)/omega0 * omega0*omega^n].
long cutoff(const Grid& grid, int n);

// Largest N with s(N) <= k_max.
int max_level(double omega0, double omega, long k_max);

// l(n) = min{ min{m : rho(m) > sigma*rho(n)}, n_max }, computed exactly from
// the rho provider.  rho is assumed non-decreasing over levels.
int lookahead(const Grid& grid, int n, double sigma, const NoiseBehavior& rho);

// K ~ log(sigma)/log(omega); diagnostic only, the selection rules use
// lookahead() itself.
double lookahead_gap_estimate(double sigma, double omega);

}  // namespace lepbal
