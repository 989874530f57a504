#include "lepbal/noise.hpp"

#include <cmath>
#include <limits>

#include "lepbal/errors.hpp"
#include "lepbal/power_sums.hpp"

namespace lepbal {

std::string to_string(RhoMode mode) {
    switch (mode) {
        case RhoMode::AnalyticStochastic: return "analytic-stochastic";
        case RhoMode::Deterministic: return "deterministic";
        case RhoMode::SplitEstimate: return "split-estimate";
    }
    return "?";
}

RhoMode rho_mode_from_string(const std::string& name) {
    if (name == "analytic-stochastic" || name == "analytic") return RhoMode::AnalyticStochastic;
    if (name == "deterministic") return RhoMode::Deterministic;
    if (name == "split-estimate" || name == "split") return RhoMode::SplitEstimate;
    throw ConstraintViolation("rho_mode in {analytic-stochastic, deterministic, split-estimate}");
}

NoiseBehavior NoiseBehavior::analytic_stochastic(const ModelParams& params, const Grid& grid) {
    NoiseBehavior nb;
    nb.mode_ = RhoMode::AnalyticStochastic;
    nb.cutoffs_ = grid.levels;
    nb.values_.resize(grid.levels.size());
    const double q = 2.0 * params.lambda + 2.0 * params.epsilon;
    // One pass over 1..s(n_max)-1, collecting the prefix at each cutoff.
    double prefix = 0.0;
    long k = 1;
    for (std::size_t n = 0; n < grid.levels.size(); ++n) {
        for (; k < grid.levels[n]; ++k) prefix += std::pow(static_cast<double>(k), q);
        nb.values_[n] = params.delta * std::sqrt(prefix);
    }
    return nb;
}

NoiseBehavior NoiseBehavior::deterministic(double delta, double lambda, const Grid& grid) {
    NoiseBehavior nb;
    nb.mode_ = RhoMode::Deterministic;
    nb.cutoffs_ = grid.levels;
    nb.values_.resize(grid.levels.size());
    for (std::size_t n = 0; n < grid.levels.size(); ++n)
        nb.values_[n] = delta * std::pow(static_cast<double>(grid.levels[n]), lambda);
    return nb;
}

NoiseBehavior NoiseBehavior::split_estimate(const SplitInstance& split, const Grid& grid) {
    if (cutoff(grid, grid.n_max) - 1 > split.k_max)
        throw LevelOutOfRange("grid exceeds split instance dimension");
    NoiseBehavior nb;
    nb.mode_ = RhoMode::SplitEstimate;
    nb.cutoffs_ = grid.levels;
    nb.values_.assign(grid.levels.size(), std::numeric_limits<double>::quiet_NaN());
    nb.lambda_ = split.params.lambda;
    nb.half_diff_.resize(split.noise_a.size());
    for (std::size_t i = 0; i < split.noise_a.size(); ++i)
        nb.half_diff_[i] = 0.5 * (split.noise_a[i] - split.noise_b[i]);
    return nb;
}

double NoiseBehavior::operator()(int n) const {
    if (n < 0 || n >= static_cast<int>(values_.size()))
        throw LevelOutOfRange("rho level " + std::to_string(n));
    if (std::isnan(values_[static_cast<std::size_t>(n)])) {
        // Extend the running prefix of (k^lambda * half_diff_k)^2, recording
        // the value of every level passed on the way; the walk never revisits
        // an index, so memoization cannot change results.
        for (int j = 0; j <= n; ++j) {
            double& vj = values_[static_cast<std::size_t>(j)];
            if (!std::isnan(vj)) continue;
            for (long k = cum_upto_ + 1; k < cutoffs_[static_cast<std::size_t>(j)]; ++k) {
                const double amp = lambda_ == 1.0 ? static_cast<double>(k)
                                                  : std::pow(static_cast<double>(k), lambda_);
                const double c = amp * half_diff_[static_cast<std::size_t>(k - 1)];
                cum_sq_ += c * c;
            }
            cum_upto_ = std::max(cum_upto_, cutoffs_[static_cast<std::size_t>(j)] - 1);
            vj = std::sqrt(cum_sq_);
        }
    }
    return values_[static_cast<std::size_t>(n)];
}

double rho_stochastic(const ModelParams& params, const Grid& grid, int m) {
    const long s = cutoff(grid, m);
    const double q = 2.0 * params.lambda + 2.0 * params.epsilon;
    return params.delta * std::sqrt(power_sum_range(q, 1, s));
}

double rho_deterministic(double delta, double lambda, const Grid& grid, int n) {
    return delta * std::pow(static_cast<double>(cutoff(grid, n)), lambda);
}

double rho_estimated(const SplitInstance& split, const Grid& grid, int n) {
    return NoiseBehavior::split_estimate(split, grid)(n);
}

}  // namespace lepbal
