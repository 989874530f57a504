#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lepbal/analysis.hpp"
#include "lepbal/errors.hpp"
#include "lepbal/estimator.hpp"
#include "lepbal/power_sums.hpp"
#include "testutil.hpp"

using namespace lepbal;

namespace {

// Brute-force oracle: materialize both coefficient vectors and take the
// Euclidean norm of their difference, independent of the band-sum path.
double vector_diff_norm(const ProblemInstance& inst, const Grid& grid, int n, int m) {
    const Reconstruction a = reconstruct(inst, grid, n);
    const Reconstruction b = reconstruct(inst, grid, m);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        const double d = a.coeffs[i] - b.coeffs[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double vector_error_norm(const ProblemInstance& inst, const Grid& grid, int n) {
    const Reconstruction r = reconstruct(inst, grid, n);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
        const double d = r.coeffs[i] - inst.truth[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

ModelParams base_params() {
    return {2.0, 1.0, 0.0, 1.0, 1e-3, 3.0, 2.0};
}

}  // namespace

TEST_CASE("reconstruct keeps the half-open active range") {
    const ModelParams p = base_params();
    const Grid g = make_grid(p, 64);
    ProblemInstance inst = draw_problem(p, 64, 1);

    SUBCASE("noise-free reconstruction truncates the truth") {
        std::fill(inst.noise.begin(), inst.noise.end(), 0.0);
        const Reconstruction r = reconstruct(inst, g, 2);  // s = 12
        for (long k = 1; k < 12; ++k) CHECK(r.coeffs[k - 1] == inst.truth[k - 1]);
        for (long k = 12; k <= 64; ++k) CHECK(r.coeffs[k - 1] == 0.0);
    }
    SUBCASE("lambda = 1 amplifies noise by k") {
        inst.truth[1] = 0.25;   // k = 2
        inst.noise[1] = 0.125;
        const Reconstruction r = reconstruct(inst, g, 2);
        CHECK(r.coeffs[1] == 0.25 + 2.0 * 0.125);
    }
}

TEST_CASE("cutoff may exceed the instance dimension by exactly one") {
    const ModelParams p = base_params();
    const Grid wide = make_grid(p, 256);  // levels go beyond a smaller instance
    // s = [3,6,12,24,48,96,192]; instance with k_max = 95 accepts s = 96 = k_max+1
    const ProblemInstance inst = draw_problem(p, 95, 3);
    CHECK_NOTHROW(reconstruct(inst, wide, 5));   // s = 96
    CHECK_THROWS_AS(reconstruct(inst, wide, 6), LevelOutOfRange);  // s = 192
    const ProblemInstance inst94 = draw_problem(p, 94, 3);
    CHECK_THROWS_AS(reconstruct(inst94, wide, 5), LevelOutOfRange);
}

TEST_CASE("diff_norm agrees with the vector oracle") {
    const ModelParams p = base_params();
    const Grid g = make_grid(p, 128);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const ProblemInstance inst = draw_problem(p, 128, rng());
        for (int n = 0; n <= g.n_max; ++n) {
            CHECK(diff_norm(inst, g, n, n) == 0.0);
            for (int m = n; m <= g.n_max; ++m) {
                CHECK(testutil::rel_err(diff_norm(inst, g, n, m),
                                        vector_diff_norm(inst, g, n, m)) < 1e-12);
            }
        }
    }
}

TEST_CASE("diff_norm satisfies the triangle inequality along levels") {
    const ModelParams p = base_params();
    const Grid g = make_grid(p, 128);
    const ProblemInstance inst = draw_problem(p, 128, 17);
    for (int n = 0; n <= g.n_max; ++n)
        for (int q = n; q <= g.n_max; ++q)
            for (int m = q; m <= g.n_max; ++m)
                CHECK(diff_norm(inst, g, n, m) <=
                      diff_norm(inst, g, n, q) + diff_norm(inst, g, q, m) + 1e-15);
}

TEST_CASE("orthogonal bands add in squares (Pythagoras across levels)") {
    const ModelParams p = base_params();
    const Grid g = make_grid(p, 128);
    const ProblemInstance inst = draw_problem(p, 128, 23);
    for (int n = 0; n + 2 <= g.n_max; ++n) {
        const double whole = band_diff_sq(inst, g, n, n + 2);
        const double parts = band_diff_sq(inst, g, n, n + 1) + band_diff_sq(inst, g, n + 1, n + 2);
        CHECK(testutil::rel_err(whole, parts) < 1e-12);
    }
}

TEST_CASE("error_norm matches the vector oracle and its degenerate branches") {
    const ModelParams p = base_params();
    const Grid g = make_grid(p, 128);

    SUBCASE("truth below the cutoff and zero noise gives zero") {
        ProblemInstance inst = draw_problem(p, 128, 2);
        std::fill(inst.noise.begin(), inst.noise.end(), 0.0);
        for (long k = 12; k <= 128; ++k) inst.truth[k - 1] = 0.0;  // s(2) = 12
        CHECK(error_norm(inst, g, 2) == 0.0);
    }
    SUBCASE("zero noise leaves the truth tail") {
        ProblemInstance inst = draw_problem(p, 128, 2);
        std::fill(inst.noise.begin(), inst.noise.end(), 0.0);
        double tail = 0.0;
        for (long k = 12; k <= 128; ++k) tail += inst.truth[k - 1] * inst.truth[k - 1];
        CHECK(error_norm(inst, g, 2) == doctest::Approx(std::sqrt(tail)).epsilon(1e-12));
    }
    SUBCASE("random instances agree with the brute-force norm") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 20; ++trial) {
            const ProblemInstance inst = draw_problem(p, 128, rng());
            for (int n = 0; n <= g.n_max; ++n)
                CHECK(testutil::rel_err(error_norm(inst, g, n),
                                        vector_error_norm(inst, g, n)) < 1e-12);
        }
    }
}

TEST_CASE("expected_error_sq reproduces zeta(2) - 1 in the noise-free limit") {
    // gamma = 1, eta = 1, s(n) = 2: prior tail = sum_{k>=2} k^-2 = pi^2/6 - 1.
    ModelParams p{1.0, 1.0, 0.0, 1.0, 1e-300, 2.0, 2.0};
    const Grid g = make_grid(p, 64);
    REQUIRE(cutoff(g, 0) == 2);
    const double want = std::numbers::pi * std::numbers::pi / 6.0 - 1.0;
    CHECK(expected_error_sq(p, g, 0) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("expected_error_sq three-term noise example") {
    // eta = 0 shuts off the prior part; delta^2 sum_{k<4} k^(2*0.5) = 0.01*(1+2+3).
    ModelParams p{1.0, 0.5, 0.0, 0.0, 0.1, 4.0, 2.0};
    const Grid g = make_grid(p, 64);
    REQUIRE(cutoff(g, 0) == 4);
    CHECK(expected_error_sq(p, g, 0) == doctest::Approx(0.06).epsilon(1e-12));
}

TEST_CASE("expected_diff_sq equals the MC mean of diff_norm^2 (5 SE)") {
    ModelParams p = base_params();
    p.delta = 0.05;
    const long k_max = 48;
    const Grid g = make_grid(p, k_max);
    const CoefficientScales scales = make_scales(p, k_max);
    const int n = 1, m = 3;
    const double want = expected_diff_sq(p, g, n, m);
    testutil::RunningStats stats;
    for (int r = 0; r < 10000; ++r) {
        const ProblemInstance inst = draw_problem(p, scales, k_max, stream_seed(99, r));
        const double d = diff_norm(inst, g, n, m);
        stats.add(d * d);
    }
    CHECK(std::abs(stats.mean - want) < 5.0 * stats.se_of_mean());
}

TEST_CASE("adjacent-difference and error sandwiches hold on the random domain") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const ModelParams p = testutil::random_params(rng);
        const Grid g = make_grid(p, 4096);
        const SandwichConstants c = sandwich_constants(p);
        const double q1 = 2.0 * p.lambda + 2.0 * p.epsilon + 1.0;
        const double g1 = -2.0 * p.gamma + 1.0;
        auto prior_term = [&](int n) {
            return p.eta * p.eta * std::pow(p.omega0, g1) / (2.0 * p.gamma - 1.0) *
                   std::pow(p.omega, n * g1);
        };
        auto noise_term = [&](int m) {
            return p.delta * p.delta * std::pow(p.omega0, q1) / q1 * std::pow(p.omega, m * q1);
        };
        for (int n = 0; n < g.n_max; ++n) {
            const double err = expected_error_sq(p, g, n);
            const double ref_err = prior_term(n) + noise_term(n);
            CHECK(err >= c.c5 * ref_err * (1.0 - 1e-9));
            CHECK(err <= c.c6 * ref_err * (1.0 + 1e-9));
            for (int m = n + 1; m <= std::min(n + 5, g.n_max); ++m) {
                const double diff = expected_diff_sq(p, g, n, m);
                const double ref = prior_term(n) + noise_term(m);
                CHECK(diff >= c.c1 * ref * (1.0 - 1e-9));
                CHECK(diff <= c.c2 * ref * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("expected_error_sq is unimodal over levels") {
    const ModelParams p{2.0, 1.0, 0.0, 1.0, 1e-7, 50.0, 2.0};
    const Grid g = make_grid(p, 16384);
    int sign_changes = 0;
    double prev = expected_error_sq(p, g, 0);
    bool decreasing = true;
    for (int n = 1; n <= g.n_max; ++n) {
        const double cur = expected_error_sq(p, g, n);
        if (decreasing && cur > prev) {
            decreasing = false;
            ++sign_changes;
        }
        if (!decreasing) CHECK(cur > prev);  // strictly increasing after the turn
        prev = cur;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("inverse_power_tail agrees with long-double brute force") {
    for (const double p : {1.3, 2.0, 4.0, 6.0}) {
        for (const long start : {1L, 2L, 17L, 200L}) {
            long double acc = 0.0L;
            for (long k = start + 3000000; k >= start; --k)  // summed small-to-large
                acc += std::pow(static_cast<long double>(k), static_cast<long double>(-p));
            acc += std::pow(static_cast<long double>(start) + 3000000.5L, 1.0L - static_cast<long double>(p)) /
                   (static_cast<long double>(p) - 1.0L);
            CHECK(testutil::rel_err(inverse_power_tail(p, start), static_cast<double>(acc)) < 1e-9);
        }
    }
}
