#pragma once

// Closed-form machinery behind the oracle inequality: the sandwich constants
// c1..c6, the side conditions on omega0, the balance point n_opt, the
// Riemann-sum bounds for power sums over grid bands, chi-square-mixture tail
// bounds, the four probability-tail expressions, and the oracle constant.

#include <optional>

#include "lepbal/model.hpp"
#include "lepbal/schedule.hpp"

namespace lepbal {

// With r+ = (omega0+1)/omega0, r- = (omega0-1)/omega0, q = 2lambda+2eps:
//   c1 = c5 = min{ r+^(1-2gamma) (1 - omega^(1-2gamma)),
//                  r-^(q+1)      (1 - omega^-(q+1)) }
//   c3 =       r-^(q+1) (1 - omega^-(q+1))
//   c4 =       r+^(q+1)
//   c2 = c6 = max{ r-^(1-2gamma), r+^(q+1) }
// and always c1 = c5 <= c3 < 1 < c4 <= c2 = c6.
struct SandwichConstants {
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0;
};

SandwichConstants sandwich_constants(const ModelParams& params);

// The four omega0-largeness conditions, with their evaluated left-hand sides:
//   hi1: c3/c6 >= 1/2          hi2: c4/c1 <= 2
//   hi3: c1*omega0*omega/(2gamma-1) >= 1
//   hi5: c3*omega0/(1+2lambda+2eps) > 1
struct ConditionReport {
    bool hi1 = false, hi2 = false, hi3 = false, hi5 = false;
    double lhs_hi1 = 0, lhs_hi2 = 0, lhs_hi3 = 0, lhs_hi5 = 0;
    bool all() const { return hi1 && hi2 && hi3 && hi5; }
};

ConditionReport check_conditions(const ModelParams& params);

// Balance point of the two error terms:
//   s* = (eta^2/delta^2 * (2gamma-1)/(2lambda+2eps+1))^(1/(2lambda+2eps+2gamma))
//   n_opt_real = log(s*/omega0)/log(omega)
// `exists` is false when n_opt_real < 0 (omega0 too big for this delta);
// n_opt is the nearest integer clamped to [0, n_max].
struct OptimalLevel {
    double s_star = 0.0;
    double n_opt_real = 0.0;
    bool exists = false;
    int n_opt = 0;
};

OptimalLevel n_opt_closed(const ModelParams& params, int n_max);

// Integer argmin of expected_error_sq over 0..n_max, ties toward the smaller
// level.
int n_opt_empirical(const ModelParams& params, const Grid& grid);

struct RiemannBounds {
    double lower = 0, sum = 0, upper = 0;
};

// For m/omega >= n >= omega0 (n, m are raw indices, not levels):
//   decaying, kappa > 1:   bounds around sum_{n <= k < m} k^-kappa
//   growing,  kappa >= 0:  bounds around sum_{n <= k < m} k^+kappa
RiemannBounds riemann_bounds_decaying(long n, long m, double kappa, double omega0, double omega);
RiemannBounds riemann_bounds_growing(long n, long m, double kappa, double omega0, double omega);

// P(Z >= z) <= sqrt(2) exp(-z/4) for Z a unit-trace chi-square mixture.
double gauss_tail_upper(double z);

// P(Z <= z) <= exp((1 - z + log z)/(2 max_alpha_sq)) <= (e z)^(1/(2 max_alpha_sq)).
struct GaussianLowerTail {
    double tight = 0.0;
    double weak = 0.0;
};

GaussianLowerTail gauss_tail_lower(double z, double max_alpha_sq);

// P{ b(n) > tau } <= K sqrt(2) e^(-tau^2) for n > n_opt.
double tail_bound_overshoot(double tau, int lookahead_gap);
// Same for the smoothed functional B, with the level-count factor
// log(delta/omega0)/(-lambda log omega).
double tail_bound_overshoot_smoothed(double tau, int lookahead_gap, double delta, double omega0,
                                     double omega, double lambda);

// P{ b(n) < tau } <= 32 e omega^(K(2lambda+2eps+1)) tau^2
//                    omega^(-gap(2lambda+2eps+2gamma)) for gap = n_opt - n >= 0;
// exceeds 1 (vacuous) for small gaps.
double tail_bound_undershoot(const ModelParams& params, double tau, int gap, int lookahead_gap);
// B variant: exponent (2lambda+2eps+1) without the K factor.
double tail_bound_undershoot_smoothed(const ModelParams& params, double tau, int gap);

// Split-estimate variants: overshoot K e/tau (requires e/(2 tau) < 1);
// undershoot 64 e omega^(2lambda+2eps+1) tau omega^(-gap(lambda+2eps+2gamma)).
struct SplitTailBounds {
    double overshoot = 0.0;
    double undershoot = 0.0;
};

SplitTailBounds split_tail_bounds(const ModelParams& params, double tau, int gap,
                                  int lookahead_gap);

// The explicit constant of the oracle inequality, evaluated term by term for
// caller-supplied p_bar > 1 and c_p >= 1.  Returns nullopt when either
// geometric series in the proof fails to converge, i.e. unless
//   2lambda + 2eps + 2gamma(1 - p_bar) + p_bar > 0   and
//   omega^(2lambda+2eps+1) (sqrt(2) e^(-tau^2))^(1/p_bar) < 1.
std::optional<double> oracle_constant(const ModelParams& params, double tau, double p_bar,
                                      double c_p);

}  // namespace lepbal
