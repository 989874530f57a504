#pragma once

// Noise-behavior functions rho(n): the size of the propagated noise in the
// solution space at cut-off level n.  Three providers:
//   analytic-stochastic  rho(n)^2 = delta^2 sum_{k < s(n)} k^(2lambda+2eps)
//   deterministic        rho(n)   = s(n)^lambda * delta
//   split-estimate       rho~(n)  = || (x_{n,1} - x_{n,2}) / 2 ||
// The split estimate is random but fixed per SplitInstance and satisfies
// E rho~(n)^2 = rho(n)^2.

#include <string>
#include <vector>

#include "lepbal/model.hpp"
#include "lepbal/schedule.hpp"

namespace lepbal {

enum class RhoMode { AnalyticStochastic, Deterministic, SplitEstimate };

std::string to_string(RhoMode mode);
RhoMode rho_mode_from_string(const std::string& name);

class NoiseBehavior {
public:
    static NoiseBehavior analytic_stochastic(const ModelParams& params, const Grid& grid);
    static NoiseBehavior deterministic(double delta, double lambda, const Grid& grid);
    static NoiseBehavior split_estimate(const SplitInstance& split, const Grid& grid);

    // rho(n) or rho~(n).  Analytic and deterministic values are precomputed
    // and a const object may be shared freely across threads.  Split values
    // are memoized on first access (levels the selection never asks for are
    // never computed); a split provider must stay on one thread.
    double operator()(int n) const;

    RhoMode mode() const { return mode_; }
    int n_max() const { return static_cast<int>(values_.size()) - 1; }

private:
    NoiseBehavior() = default;

    RhoMode mode_ = RhoMode::AnalyticStochastic;
    mutable std::vector<double> values_;      // rho per level; NaN = not yet computed
    std::vector<long> cutoffs_;               // s(0..n_max)
    std::vector<double> half_diff_;           // split mode: (a_k - b_k)/2
    double lambda_ = 0.0;
    mutable double cum_sq_ = 0.0;             // split mode: running sum of (k^l * half_diff)^2
    mutable long cum_upto_ = 0;               // indices 1..cum_upto_ accumulated
};

// Free-function forms of the three providers.
double rho_stochastic(const ModelParams& params, const Grid& grid, int m);
double rho_deterministic(double delta, double lambda, const Grid& grid, int n);
double rho_estimated(const SplitInstance& split, const Grid& grid, int n);

}  // namespace lepbal
