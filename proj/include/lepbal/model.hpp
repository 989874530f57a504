#pragma once

// Gaussian sequence model in SVD coordinates:
//   <x,u_k>  ~ N(0, (eta k^-gamma)^2)     (truth)
//   sigma_k  = k^-lambda                  (singular values)
//   <xi,v_k> ~ N(0, (delta k^epsilon)^2)  (noise)
// all independent, k = 1..k_max.  Generation is a pure function of
// (params, k_max, seed) and is always a standard-normal draw times a scale,
// so scaling eta or delta scales the coefficients exactly.

#include <cstdint>
#include <random>
#include <vector>

namespace lepbal {

struct ModelParams {
    double gamma = 0.0;    // prior decay exponent, > 1/2
    double lambda = 0.0;   // singular value decay exponent, > 0 and > -epsilon
    double epsilon = 0.0;  // noise color exponent
    double eta = 0.0;      // prior scale, > 0
    double delta = 0.0;    // noise scale, > 0
    double omega0 = 0.0;   // grid offset, > 1
    double omega = 0.0;    // grid ratio, > 1 and omega0*omega > omega0 + 1
};

// Returns the params iff every invariant holds; otherwise throws
// ConstraintViolation naming the first violated inequality, in the order
// gamma, lambda, lambda+epsilon, eta, delta, omega0, omega, omega0*omega.
ModelParams validate_params(const ModelParams& raw);

struct ProblemInstance {
    ModelParams params;
    long k_max = 0;
    std::uint64_t seed = 0;
    std::vector<double> truth;  // <x,u_k> at index k-1
    std::vector<double> noise;  // <xi,v_k> at index k-1

    double singular_value(long k) const;      // k^-lambda
    double inv_singular_value(long k) const;  // k^lambda
};

// Two half-measurements, each at noise level sqrt(2)*delta.  Their average
// has the law of a single measurement at level delta and their half
// difference is an independent copy of the propagated-noise magnitude.
struct SplitInstance {
    ModelParams params;
    long k_max = 0;
    std::uint64_t seed = 0;
    std::vector<double> truth;
    std::vector<double> noise_a;
    std::vector<double> noise_b;

    // Working data for the estimator: truth with noise (noise_a + noise_b)/2.
    ProblemInstance combined() const;
};

// Per-index standard deviations; precompute once when drawing many instances
// with the same params.
struct CoefficientScales {
    std::vector<double> truth_sd;  // eta * k^-gamma
    std::vector<double> noise_sd;  // delta * k^epsilon
};

CoefficientScales make_scales(const ModelParams& params, long k_max);

ProblemInstance draw_problem(const ModelParams& params, long k_max, std::uint64_t seed);
ProblemInstance draw_problem(const ModelParams& params, const CoefficientScales& scales,
                             long k_max, std::uint64_t seed);
SplitInstance draw_split(const ModelParams& params, long k_max, std::uint64_t seed);
SplitInstance draw_split(const ModelParams& params, const CoefficientScales& scales,
                         long k_max, std::uint64_t seed);

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// Seed of the RNG stream for replication `index` under `base_seed`:
// mix64(base_seed + (index + 1) * 0x9E3779B97F4A7C15).  Fixed; parallel runs
// reproduce serial runs because every replication derives its own stream.
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t index);

// Standard normal generator: mt19937_64 plus Box-Muller on the top 53 bits of
// consecutive engine outputs.  Both values of each pair are used, so a stream
// consumes exactly one engine output per normal.  Self-contained on purpose:
// the sequence is fixed by this code, not by the standard library's
// distribution internals.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - to_unit(engine_());  // (0, 1]
        const double u2 = to_unit(engine_());        // [0, 1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t raw() { return engine_(); }

private:
    static double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace lepbal
