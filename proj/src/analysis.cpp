#include "lepbal/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "lepbal/errors.hpp"
#include "lepbal/estimator.hpp"
#include "lepbal/power_sums.hpp"

namespace lepbal {

namespace {
constexpr double kE = 2.71828182845904523536;
}

SandwichConstants sandwich_constants(const ModelParams& p) {
    const double r_up = (p.omega0 + 1.0) / p.omega0;
    const double r_dn = (p.omega0 - 1.0) / p.omega0;
    const double q1 = 2.0 * p.lambda + 2.0 * p.epsilon + 1.0;
    const double g1 = 1.0 - 2.0 * p.gamma;

    SandwichConstants c;
    const double prior_low = std::pow(r_up, g1) * (1.0 - std::pow(p.omega, g1));
    const double noise_low = std::pow(r_dn, q1) * (1.0 - std::pow(p.omega, -q1));
    c.c1 = std::min(prior_low, noise_low);
    c.c3 = noise_low;
    c.c4 = std::pow(r_up, q1);
    c.c2 = std::max(std::pow(r_dn, g1), c.c4);
    c.c5 = c.c1;
    c.c6 = c.c2;
    return c;
}

ConditionReport check_conditions(const ModelParams& p) {
    const SandwichConstants c = sandwich_constants(p);
    ConditionReport r;
    r.lhs_hi1 = c.c3 / c.c6;
    r.lhs_hi2 = c.c4 / c.c1;
    r.lhs_hi3 = c.c1 * p.omega0 * p.omega / (2.0 * p.gamma - 1.0);
    r.lhs_hi5 = c.c3 * p.omega0 / (1.0 + 2.0 * p.lambda + 2.0 * p.epsilon);
    r.hi1 = r.lhs_hi1 >= 0.5;
    r.hi2 = r.lhs_hi2 <= 2.0;
    r.hi3 = r.lhs_hi3 >= 1.0;
    r.hi5 = r.lhs_hi5 > 1.0;
    return r;
}

OptimalLevel n_opt_closed(const ModelParams& p, int n_max) {
    const double q1 = 2.0 * p.lambda + 2.0 * p.epsilon + 1.0;
    const double expo = 2.0 * p.lambda + 2.0 * p.epsilon + 2.0 * p.gamma;
    OptimalLevel out;
    out.s_star = std::pow(p.eta * p.eta / (p.delta * p.delta) * (2.0 * p.gamma - 1.0) / q1,
                          1.0 / expo);
    out.n_opt_real = std::log(out.s_star / p.omega0) / std::log(p.omega);
    out.exists = out.n_opt_real >= 0.0;
    const double rounded = std::round(out.n_opt_real);
    out.n_opt = static_cast<int>(std::clamp(rounded, 0.0, static_cast<double>(n_max)));
    return out;
}

int n_opt_empirical(const ModelParams& params, const Grid& grid) {
    int best = 0;
    double best_value = expected_error_sq(params, grid, 0);
    for (int n = 1; n <= grid.n_max; ++n) {
        const double v = expected_error_sq(params, grid, n);
        if (v < best_value) {
            best_value = v;
            best = n;
        }
    }
    return best;
}

RiemannBounds riemann_bounds_decaying(long n, long m, double kappa, double omega0, double omega) {
    if (!(kappa > 1.0)) throw PreconditionViolated("decaying case needs kappa > 1");
    if (!(static_cast<double>(m) / omega >= static_cast<double>(n) &&
          static_cast<double>(n) >= omega0))
        throw PreconditionViolated("riemann bounds need m/omega >= n >= omega0");
    RiemannBounds b;
    const double nk = std::pow(static_cast<double>(n), -kappa + 1.0);
    b.lower = (1.0 - std::pow(omega, -kappa + 1.0)) / (kappa - 1.0) * nk;
    b.upper = std::pow((omega0 - 1.0) / omega0, -kappa + 1.0) / (kappa - 1.0) * nk;
    b.sum = power_sum_range(-kappa, n, m);
    return b;
}

RiemannBounds riemann_bounds_growing(long n, long m, double kappa, double omega0, double omega) {
    if (!(kappa >= 0.0)) throw PreconditionViolated("growing case needs kappa >= 0");
    if (!(static_cast<double>(m) / omega >= static_cast<double>(n) &&
          static_cast<double>(n) >= omega0))
        throw PreconditionViolated("riemann bounds need m/omega >= n >= omega0");
    RiemannBounds b;
    const double mk = std::pow(static_cast<double>(m), kappa + 1.0);
    b.lower = std::pow((omega0 - 1.0) / omega0, kappa + 1.0) *
              (1.0 - std::pow(omega, -kappa - 1.0)) / (1.0 + kappa) * mk;
    b.upper = mk / (1.0 + kappa);
    b.sum = power_sum_range(kappa, n, m);
    return b;
}

double gauss_tail_upper(double z) {
    if (z < 0.0) throw PreconditionViolated("gauss_tail_upper: z >= 0 required");
    return std::sqrt(2.0) * std::exp(-z / 4.0);
}

GaussianLowerTail gauss_tail_lower(double z, double max_alpha_sq) {
    if (!(z > 0.0 && z < 1.0)) throw PreconditionViolated("gauss_tail_lower: z in (0,1)");
    if (!(max_alpha_sq > 0.0 && max_alpha_sq <= 1.0))
        throw PreconditionViolated("gauss_tail_lower: max_alpha_sq in (0,1]");
    GaussianLowerTail t;
    t.tight = std::exp((1.0 - z + std::log(z)) / (2.0 * max_alpha_sq));
    t.weak = std::pow(kE * z, 1.0 / (2.0 * max_alpha_sq));
    return t;
}

double tail_bound_overshoot(double tau, int lookahead_gap) {
    if (!(tau > 0.0) || lookahead_gap < 1)
        throw PreconditionViolated("overshoot bound needs tau > 0 and K >= 1");
    return lookahead_gap * std::sqrt(2.0) * std::exp(-tau * tau);
}

double tail_bound_overshoot_smoothed(double tau, int lookahead_gap, double delta, double omega0,
                                     double omega, double lambda) {
    const double level_count = std::log(delta / omega0) / (-lambda * std::log(omega));
    return tail_bound_overshoot(tau, lookahead_gap) * level_count;
}

double tail_bound_undershoot(const ModelParams& p, double tau, int gap, int lookahead_gap) {
    if (gap < 0 || !(tau > 0.0)) throw PreconditionViolated("undershoot bound needs gap >= 0, tau > 0");
    const double q1 = 2.0 * p.lambda + 2.0 * p.epsilon + 1.0;
    const double expo = 2.0 * p.lambda + 2.0 * p.epsilon + 2.0 * p.gamma;
    return 32.0 * kE * std::pow(p.omega, lookahead_gap * q1) * tau * tau *
           std::pow(p.omega, -static_cast<double>(gap) * expo);
}

double tail_bound_undershoot_smoothed(const ModelParams& p, double tau, int gap) {
    return tail_bound_undershoot(p, tau, gap, 1);
}

SplitTailBounds split_tail_bounds(const ModelParams& p, double tau, int gap, int lookahead_gap) {
    if (!(kE / (2.0 * tau) < 1.0))
        throw PreconditionViolated("split overshoot bound needs e/(2 tau) < 1");
    SplitTailBounds t;
    t.overshoot = lookahead_gap * kE / tau;
    const double q1 = 2.0 * p.lambda + 2.0 * p.epsilon + 1.0;
    const double expo = p.lambda + 2.0 * p.epsilon + 2.0 * p.gamma;
    t.undershoot = 64.0 * kE * std::pow(p.omega, q1) * tau *
                   std::pow(p.omega, -static_cast<double>(gap) * expo);
    return t;
}

std::optional<double> oracle_constant(const ModelParams& p, double tau, double p_bar,
                                      double c_p) {
    if (!(p_bar > 1.0) || !(c_p >= 1.0))
        throw PreconditionViolated("oracle_constant needs p_bar > 1, c_p >= 1");
    const double q1 = 2.0 * p.lambda + 2.0 * p.epsilon + 1.0;
    const SandwichConstants c = sandwich_constants(p);

    // Guards on the two geometric series of the proof.  The under-selection
    // series has per-step ratio omega^(-E/p_bar) with
    // E = 2lambda + 2eps + 2gamma(1 - p_bar) + p_bar, so it converges exactly
    // when E > 0; the over-selection series needs
    // omega^(2lambda+2eps+1) (sqrt(2) e^(-tau^2))^(1/p_bar) < 1.
    const double series_exp =
        2.0 * p.lambda + 2.0 * p.epsilon + 2.0 * p.gamma * (1.0 - p_bar) + p_bar;
    const double over_ratio =
        std::pow(p.omega, q1) * std::pow(std::sqrt(2.0) * std::exp(-tau * tau), 1.0 / p_bar);
    if (!(series_exp > 0.0) || !(over_ratio < 1.0)) return std::nullopt;
    const double under_ratio = std::pow(p.omega, -series_exp / p_bar);

    const double under_term = std::pow(32.0 * kE * std::pow(p.omega, q1) * tau * tau, 1.0 / p_bar) *
                              (c.c6 / c.c5) / (1.0 - under_ratio);
    const double middle_term = std::pow(p.omega, 1.0 - 2.0 * p.gamma);
    const double over_term = 1.0 / (1.0 - over_ratio);
    return 4.0 * c_p * (under_term + middle_term + over_term);
}

}  // namespace lepbal
