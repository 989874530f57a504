#include "lepbal/balancing.hpp"

#include <algorithm>
#include <cmath>

#include "lepbal/errors.hpp"
#include "lepbal/estimator.hpp"

namespace lepbal {

BalancingConfig validate_config(const BalancingConfig& raw) {
    if (!(raw.sigma > 1.0)) throw ConstraintViolation("sigma > 1");
    if (!(raw.kappa > 0.0)) throw ConstraintViolation("kappa > 0");
    if (!(raw.tau > 0.0)) throw ConstraintViolation("tau > 0");
    return raw;
}

namespace {

// Shared state of one selection scan.  Tracks the highest level whose data
// entered any band or rho~ computation, which is what `evaluations` reports.
struct Scan {
    const ProblemInstance& data;
    const Grid& grid;
    const NoiseBehavior& rho;
    double sigma;
    int max_data_level = -1;
    int max_gap = 0;

    void touch(int level) { max_data_level = std::max(max_data_level, level); }

    double b(int n) {
        const int l = lookahead(grid, n, sigma, rho);
        max_gap = std::max(max_gap, l - n);
        if (l <= n) return 0.0;  // empty window, only at n = n_max
        touch(l);
        double best = 0.0;
        for (int m = n + 1; m <= l; ++m) {
            const double r = rho(m);
            if (r == 0.0) throw ZeroNoiseBehavior(m);
            best = std::max(best, 0.25 * std::sqrt(band_diff_sq(data, grid, n, m)) / r);
        }
        return best;
    }
};

}  // namespace

double functional_b(const ProblemInstance& data, const Grid& grid, const BalancingConfig& config,
                    const NoiseBehavior& rho, int n) {
    Scan scan{data, grid, rho, config.sigma};
    return scan.b(n);
}

double functional_B(const ProblemInstance& data, const Grid& grid, const BalancingConfig& config,
                    const NoiseBehavior& rho, int n) {
    if (n < 0 || n > grid.n_max) throw LevelOutOfRange("functional_B level " + std::to_string(n));
    Scan scan{data, grid, rho, config.sigma};
    // Backward recursion B(m) = max(b(m), B(m+1)); only the suffix from n matters.
    double running = 0.0;
    for (int m = grid.n_max; m >= n; --m) running = std::max(running, scan.b(m));
    return running;
}

SelectionResult classic_index(const ProblemInstance& data, const Grid& grid,
                              const BalancingConfig& config, const NoiseBehavior& rho) {
    Scan scan{data, grid, rho, config.sigma};
    const int n_levels = grid.n_max + 1;
    std::vector<double> b(static_cast<std::size_t>(n_levels));
    for (int n = 0; n < n_levels; ++n) b[static_cast<std::size_t>(n)] = scan.b(n);

    SelectionResult result;
    result.b_trace = b;
    result.lookahead_gap = scan.max_gap;
    result.evaluations = n_levels;  // the classic rule reconstructs every level

    double suffix_max = -1.0;
    int index = -1;
    for (int n = grid.n_max; n >= 0; --n) {
        suffix_max = std::max(suffix_max, b[static_cast<std::size_t>(n)]);
        if (suffix_max <= config.kappa) index = n;
    }
    if (index < 0) throw NoBalancePoint();
    result.index = index;
    return result;
}

SelectionResult fast_index(const ProblemInstance& data, const Grid& grid,
                           const BalancingConfig& config, const NoiseBehavior& rho) {
    Scan scan{data, grid, rho, config.sigma};
    SelectionResult result;
    for (int n = 0; n <= grid.n_max; ++n) {
        const double bn = scan.b(n);
        result.b_trace.push_back(bn);
        if (bn < config.tau) {
            result.index = n;
            result.evaluations = scan.max_data_level + 1;
            result.lookahead_gap = scan.max_gap;
            return result;
        }
    }
    // b(n_max) = 0, so the scan can only fall through for tau <= 0; a zero
    // threshold still terminates at the cap, where the empty window matches
    // it exactly.
    if (config.tau >= 0.0) {
        result.index = grid.n_max;
        result.evaluations = scan.max_data_level + 1;
        result.lookahead_gap = scan.max_gap;
        return result;
    }
    throw NoFastPoint();
}

}  // namespace lepbal
