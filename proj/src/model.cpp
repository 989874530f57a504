#include "lepbal/model.hpp"

#include <cmath>

#include "lepbal/errors.hpp"

namespace lepbal {

ModelParams validate_params(const ModelParams& raw) {
    if (!(raw.gamma > 0.5)) throw ConstraintViolation("gamma > 1/2");
    if (!(raw.lambda > 0.0)) throw ConstraintViolation("lambda > 0");
    if (!(raw.lambda > -raw.epsilon)) throw ConstraintViolation("lambda > -epsilon");
    if (!(raw.eta > 0.0)) throw ConstraintViolation("eta > 0");
    if (!(raw.delta > 0.0)) throw ConstraintViolation("delta > 0");
    if (!(raw.omega0 > 1.0)) throw ConstraintViolation("omega0 > 1");
    if (!(raw.omega > 1.0)) throw ConstraintViolation("omega > 1");
    if (!(raw.omega0 * raw.omega > raw.omega0 + 1.0))
        throw ConstraintViolation("omega0*omega > omega0 + 1");
    return raw;
}

double ProblemInstance::singular_value(long k) const {
    return std::pow(static_cast<double>(k), -params.lambda);
}

double ProblemInstance::inv_singular_value(long k) const {
    if (params.lambda == 1.0) return static_cast<double>(k);
    return std::pow(static_cast<double>(k), params.lambda);
}

ProblemInstance SplitInstance::combined() const {
    ProblemInstance out;
    out.params = params;
    out.k_max = k_max;
    out.seed = seed;
    out.truth = truth;
    out.noise.resize(noise_a.size());
    for (std::size_t i = 0; i < noise_a.size(); ++i)
        out.noise[i] = 0.5 * (noise_a[i] + noise_b[i]);
    return out;
}

CoefficientScales make_scales(const ModelParams& params, long k_max) {
    if (k_max <= 0) throw DegenerateDimension();
    CoefficientScales s;
    s.truth_sd.resize(static_cast<std::size_t>(k_max));
    s.noise_sd.resize(static_cast<std::size_t>(k_max));
    for (long k = 1; k <= k_max; ++k) {
        const double kd = static_cast<double>(k);
        s.truth_sd[static_cast<std::size_t>(k - 1)] = params.eta * std::pow(kd, -params.gamma);
        s.noise_sd[static_cast<std::size_t>(k - 1)] =
            params.delta * (params.epsilon == 0.0 ? 1.0 : std::pow(kd, params.epsilon));
    }
    return s;
}

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t index) {
    return mix64(base_seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

namespace {

// Draw order is fixed: truth[1..k_max], then each noise sequence in turn.
void fill_scaled(GaussianStream& g, const std::vector<double>& sd, double extra,
                 std::vector<double>& out) {
    out.resize(sd.size());
    for (std::size_t i = 0; i < sd.size(); ++i) out[i] = extra * sd[i] * g.next();
}

}  // namespace

ProblemInstance draw_problem(const ModelParams& params, const CoefficientScales& scales,
                             long k_max, std::uint64_t seed) {
    if (k_max <= 0) throw DegenerateDimension();
    ProblemInstance inst;
    inst.params = params;
    inst.k_max = k_max;
    inst.seed = seed;
    GaussianStream g(seed);
    fill_scaled(g, scales.truth_sd, 1.0, inst.truth);
    fill_scaled(g, scales.noise_sd, 1.0, inst.noise);
    return inst;
}

ProblemInstance draw_problem(const ModelParams& params, long k_max, std::uint64_t seed) {
    return draw_problem(params, make_scales(params, k_max), k_max, seed);
}

SplitInstance draw_split(const ModelParams& params, const CoefficientScales& scales,
                         long k_max, std::uint64_t seed) {
    if (k_max <= 0) throw DegenerateDimension();
    SplitInstance inst;
    inst.params = params;
    inst.k_max = k_max;
    inst.seed = seed;
    GaussianStream g(seed);
    const double sqrt2 = std::sqrt(2.0);
    fill_scaled(g, scales.truth_sd, 1.0, inst.truth);
    fill_scaled(g, scales.noise_sd, sqrt2, inst.noise_a);
    fill_scaled(g, scales.noise_sd, sqrt2, inst.noise_b);
    return inst;
}

SplitInstance draw_split(const ModelParams& params, long k_max, std::uint64_t seed) {
    return draw_split(params, make_scales(params, k_max), k_max, seed);
}

}  // namespace lepbal
