#pragma once

// Spectral cut-off reconstructions and their exact/expected distances.
//
// Cut-off convention is half-open: level n keeps coefficients 1 <= k < s(n),
// so the difference of two reconstructions lives exactly on the index band
// [s(n), s(m)) and the expectations below match the closed-form sums
//   E ||x_m^d - x_n^d||^2 = sum_{s(n) <= k < s(m)} eta^2 k^-2gamma + delta^2 k^(2lambda+2eps)
//   E ||x_n^d - x||^2     = sum_{k >= s(n)} eta^2 k^-2gamma
//                         + sum_{k < s(n)} delta^2 k^(2lambda+2eps)
// term by term.

#include <vector>

#include "lepbal/model.hpp"
#include "lepbal/schedule.hpp"

namespace lepbal {

struct Reconstruction {
    int level = 0;
    long cutoff = 0;             // s(level)
    std::vector<double> coeffs;  // x-coordinates, zero for k >= cutoff
};

// coeffs[k] = truth[k] + k^lambda * noise[k] for k < s(n).  Requires
// s(n) <= instance.k_max + 1.
Reconstruction reconstruct(const ProblemInstance& inst, const Grid& grid, int n);

// ||x_m^d - x_n^d|| over the band [s(n), s(m)); n <= m required.
double diff_norm(const ProblemInstance& inst, const Grid& grid, int n, int m);

// ||x_n^d - x|| within the k_max surrogate.
double error_norm(const ProblemInstance& inst, const Grid& grid, int n);

// Closed-form expectations (infinite prior tail included).
double expected_error_sq(const ModelParams& params, const Grid& grid, int n);
double expected_diff_sq(const ModelParams& params, const Grid& grid, int n, int m);

// sum over [s(n), s(m)) of (truth[k] + k^lambda noise[k])^2; the shared
// kernel of diff_norm and the balancing functional.
double band_diff_sq(const ProblemInstance& inst, const Grid& grid, int n, int m);

}  // namespace lepbal
