#pragma once

// Balancing functional b, its smoothed version B, and the two stopping rules:
//
//   b(n)  = max_{n < m <= l(n)} ||x_n^d - x_m^d|| / (4 rho(m)),   b(n_max) = 0
//   B(n)  = max_{n <= m <= n_max} b(m)
//   n*    = min { n : B(n) <= kappa }          (classic; evaluates all levels)
//   n_fb  = min { n : b(n) < tau }             (fast; evaluates ~n_fb + K levels)
//
// Thresholds follow the definitions exactly: non-strict for the classic rule,
// strict for the fast rule, so boundary ties differ between the two on purpose.

#include <vector>

#include "lepbal/model.hpp"
#include "lepbal/noise.hpp"
#include "lepbal/schedule.hpp"

namespace lepbal {

struct BalancingConfig {
    double sigma = 2.0;  // look-ahead ratio, > 1
    double kappa = 1.0;  // classic threshold, > 0
    double tau = 1.0;    // fast threshold, > 0
};

// Throws ConstraintViolation on the first violated bound.
BalancingConfig validate_config(const BalancingConfig& raw);

struct SelectionResult {
    int index = -1;
    std::vector<double> b_trace;  // b(0..last scanned level)
    int evaluations = 0;          // distinct levels whose reconstruction entered any computation
    int lookahead_gap = 0;        // max of l(n) - n over the scan
};

double functional_b(const ProblemInstance& data, const Grid& grid, const BalancingConfig& config,
                    const NoiseBehavior& rho, int n);
double functional_B(const ProblemInstance& data, const Grid& grid, const BalancingConfig& config,
                    const NoiseBehavior& rho, int n);

// Selection rules apply the thresholds exactly as given (the harness validates
// configs; degenerate thresholds such as tau = 0 resolve at the cap, where the
// empty window makes b(n_max) = 0).
SelectionResult classic_index(const ProblemInstance& data, const Grid& grid,
                              const BalancingConfig& config, const NoiseBehavior& rho);
SelectionResult fast_index(const ProblemInstance& data, const Grid& grid,
                           const BalancingConfig& config, const NoiseBehavior& rho);

}  // namespace lepbal
