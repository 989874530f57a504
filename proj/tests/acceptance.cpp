// Acceptance suite: nine criteria over the reference configuration
//   gamma=2, lambda=1, eps=0, eta=1, delta=1e-7, omega0=50, omega=2,
//   k_max=16384 (n_max=8), tau=1, sigma chosen so K=1, analytic rho.
// Each criterion prints one pass/fail line with the measured values.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "doctest.h"
#include "lepbal/analysis.hpp"
#include "lepbal/errors.hpp"
#include "lepbal/estimator.hpp"
#include "lepbal/harness.hpp"
#include "lepbal/power_sums.hpp"
#include "testutil.hpp"

using namespace lepbal;

namespace {

ModelParams config_a_params(double delta = 1e-7) {
    return {2.0, 1.0, 0.0, 1.0, delta, 50.0, 2.0};
}

ExperimentConfig config_a(int reps, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.params = config_a_params();
    cfg.k_max = 16384;
    cfg.balancing = {2.0, 1.0, 1.0};  // sigma=2 gives K=1; kappa=tau=1
    cfg.reps = reps;
    cfg.base_seed = seed;
    cfg.rho_mode = RhoMode::AnalyticStochastic;
    cfg.rule = SelectionRule::Fast;
    cfg.workers = 0;
    return cfg;
}

struct SharedRuns {
    ExperimentSummary oracle;                       // criterion 1 (and 9)
    std::vector<ReplicationRecord> oracle_records;
    ExperimentSummary tails;                        // criteria 2, 3, 8
    std::vector<ReplicationRecord> tail_records;
    ExperimentSummary split;                        // criteria 4, 8
    std::vector<ReplicationRecord> split_records;
    int n_opt = -1;
};

const SharedRuns& shared() {
    static const SharedRuns runs = [] {
        SharedRuns r;
        ExperimentConfig oracle_cfg = config_a(1000, 42);
        oracle_cfg.workers = 1;  // canonical run for the determinism criterion
        r.oracle = run_experiment(oracle_cfg, &r.oracle_records);
        r.n_opt = r.oracle.n_opt_empirical;

        ExperimentConfig tails_cfg = config_a(10000, 43);
        tails_cfg.probe_levels = {r.n_opt - 2, r.n_opt + 2, r.n_opt + 3, r.n_opt + 4};
        tails_cfg.probe_tau = 1.0;
        r.tails = run_experiment(tails_cfg, &r.tail_records);

        ExperimentConfig split_cfg = config_a(10000, 44);
        split_cfg.rho_mode = RhoMode::SplitEstimate;
        split_cfg.probe_levels = {1, 2, 3, 4};
        r.split = run_experiment(split_cfg, &r.split_records);
        return r;
    }();
    return runs;
}

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[acceptance] criterion %d %-28s %s  (%s)\n", criterion, name,
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

}  // namespace

TEST_CASE("preamble: side conditions hold and n_opt = 2") {
    const ConditionReport cond = check_conditions(config_a_params());
    CHECK(cond.all());
    CHECK(shared().n_opt == 2);
    CHECK(shared().oracle.n_opt_closed.n_opt == 2);
    CHECK(shared().oracle.n_max == 8);
}

TEST_CASE("criterion 1: oracle constant") {
    const double c = shared().oracle.mean_ratio;
    const bool pass = c >= 0.9 && c <= 3.0;
    report(1, "oracle constant", pass,
           fmt("mean ratio %.4f +- %.4f over %d reps, band [0.9, 3.0]", c,
               shared().oracle.ratio_se, shared().oracle.reps));
    CHECK(c >= 0.9);
    CHECK(c <= 3.0);
}

TEST_CASE("criterion 2: overshoot tail") {
    const double bound = tail_bound_overshoot(1.0, 1);  // sqrt(2)/e
    bool pass = true;
    std::string detail;
    for (const TailStat& t : shared().tails.tails) {
        if (t.level <= shared().n_opt) continue;
        const bool ok = t.freq_over <= bound + 3.0 * t.se_over;
        pass = pass && ok;
        detail += fmt("P{b(%d)>1}=%.4f ", t.level, t.freq_over);
        CHECK(t.freq_over <= bound + 3.0 * t.se_over);
    }
    report(2, "overshoot tail", pass, detail + fmt("<= bound %.4f + 3se", bound));
}

TEST_CASE("criterion 3: undershoot tail") {
    const double bound = tail_bound_undershoot(config_a_params(), 1.0, 2, 1);
    bool pass = true;
    std::string detail;
    for (const TailStat& t : shared().tails.tails) {
        if (t.level != shared().n_opt - 2) continue;
        const bool ok = t.freq_under <= bound + 3.0 * t.se_under;
        pass = pass && ok;
        detail = fmt("P{b(%d)<1}=%.5f <= bound %.4f + 3se", t.level, t.freq_under, bound);
        CHECK(t.freq_under <= bound + 3.0 * t.se_under);
    }
    report(3, "undershoot tail", pass, detail);
}

TEST_CASE("criterion 4: split-estimate unbiasedness") {
    const ExperimentSummary& s = shared().split;
    REQUIRE(s.rho_ratio_mean.size() == 4);
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < s.rho_ratio_mean.size(); ++i) {
        const bool ok = std::abs(s.rho_ratio_mean[i] - 1.0) <= 5.0 * s.rho_ratio_se[i];
        pass = pass && ok;
        detail += fmt("n=%d:%.4f ", s.probe_levels[i], s.rho_ratio_mean[i]);
        CHECK(std::abs(s.rho_ratio_mean[i] - 1.0) <= 5.0 * s.rho_ratio_se[i]);
    }
    report(4, "split unbiasedness", pass, detail + "(1 +- 5se each)");
}

TEST_CASE("criterion 5: closed form vs empirical optimum") {
    // 20 configurations: (gamma, lambda, eps) combos with lambda > -eps,
    // cycled against 20 log-spaced deltas in [1e-4, 1e-9].
    std::vector<std::array<double, 3>> combos;
    for (double g : {1.5, 2.0, 3.0})
        for (double l : {0.5, 1.0})
            for (double e : {-0.25, 0.0, 0.5})
                if (l > -e) combos.push_back({g, l, e});
    REQUIRE(combos.size() == 18);
    int checked = 0, violations = 0, skipped = 0;
    for (int i = 0; i < 20; ++i) {
        const auto& c = combos[static_cast<std::size_t>(i) % combos.size()];
        const double delta = std::pow(10.0, -4.0 - 5.0 * i / 19.0);
        const ModelParams p{c[0], c[1], c[2], 1.0, delta, 50.0, 2.0};
        const Grid grid = make_grid(p, 16384);
        const OptimalLevel opt = n_opt_closed(p, grid.n_max);
        if (!(opt.n_opt_real >= 0.0 && opt.n_opt_real <= grid.n_max)) {
            ++skipped;
            continue;
        }
        ++checked;
        const int rounded = static_cast<int>(std::round(opt.n_opt_real));
        if (std::abs(rounded - n_opt_empirical(p, grid)) > 1) ++violations;
    }
    const bool pass = violations == 0 && checked >= 15;
    report(5, "closed vs empirical n_opt", pass,
           fmt("%d checked, %d skipped (n_opt_real outside [0,n_max]), %d violations", checked,
               skipped, violations));
    CHECK(violations == 0);
    CHECK(checked >= 15);
}

TEST_CASE("criterion 6: analytic inequality suite") {
    constexpr double tol = 1e-9;
    std::mt19937_64 rng(777);
    int sandwich_checks = 0, riemann_checks = 0, riemann_skips = 0;
    bool pass = true;
    auto expect = [&](bool ok) {
        pass = pass && ok;
        CHECK(ok);
    };
    for (int trial = 0; trial < 100; ++trial) {
        const ModelParams p = testutil::random_params(rng);
        const Grid g = make_grid(p, 4096);
        const SandwichConstants c = sandwich_constants(p);
        expect(c.c1 == c.c5);
        expect(c.c2 == c.c6);
        expect(c.c1 <= c.c3 && c.c3 < 1.0 && 1.0 < c.c4 && c.c4 <= c.c2);
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
            expect(err >= c.c5 * ref_err * (1.0 - tol));
            expect(err <= c.c6 * ref_err * (1.0 + tol));
            for (int m = n + 1; m <= std::min(n + 5, g.n_max); ++m) {
                ++sandwich_checks;
                const double diff = expected_diff_sq(p, g, n, m);
                const double ref = prior_term(n) + noise_term(m);
                expect(diff >= c.c1 * ref * (1.0 - tol));
                expect(diff <= c.c2 * ref * (1.0 + tol));
                const double rho = rho_stochastic(p, g, m);
                expect(rho * rho >= c.c3 * noise_term(m) * (1.0 - tol));
                expect(rho * rho <= c.c4 * noise_term(m) * (1.0 + tol));
                // Riemann-sum lemma on the raw band [s(n), s(m)) where its
                // hypothesis m'/omega >= n' >= omega0 applies.
                const long a = cutoff(g, n), b = cutoff(g, m);
                if (static_cast<double>(b) / p.omega >= static_cast<double>(a) &&
                    static_cast<double>(a) >= p.omega0) {
                    ++riemann_checks;
                    const RiemannBounds dec =
                        riemann_bounds_decaying(a, b, 2.0 * p.gamma, p.omega0, p.omega);
                    expect(dec.lower < dec.sum && dec.sum < dec.upper);
                    const RiemannBounds gro = riemann_bounds_growing(
                        a, b, 2.0 * p.lambda + 2.0 * p.epsilon, p.omega0, p.omega);
                    expect(gro.lower < gro.sum && gro.sum < gro.upper);
                } else {
                    ++riemann_skips;
                }
            }
        }
    }
    // gauss1 chain: tight form never exceeds the weak form.
    for (double z = 0.02; z < 1.0; z += 0.02)
        for (double a = 0.05; a <= 1.0; a += 0.05) {
            const GaussianLowerTail t = gauss_tail_lower(z, a);
            expect(t.tight <= t.weak * (1.0 + tol));
        }
    report(6, "analytic inequality suite", pass,
           fmt("100 sets, %d band pairs, %d riemann brackets (%d outside lemma hypothesis)",
               sandwich_checks, riemann_checks, riemann_skips));
}

TEST_CASE("criterion 7: rate of the minimal expected error") {
    const double target = 2.0 * (2.0 * 2.0 - 1.0) / (2.0 * 2.0 + 2.0 * 1.0 + 2.0 * 0.0);
    std::vector<double> xs, ys;
    for (const double delta : {1e-5, 1e-6, 1e-7, 1e-8, 1e-9}) {
        const ModelParams p = config_a_params(delta);
        const Grid g = make_grid(p, 16384);
        double min_err = expected_error_sq(p, g, 0);
        for (int n = 1; n <= g.n_max; ++n)
            min_err = std::min(min_err, expected_error_sq(p, g, n));
        xs.push_back(std::log(delta));
        ys.push_back(std::log(min_err));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    const bool pass = std::abs(slope - target) <= 0.1;
    report(7, "error rate in delta", pass, fmt("log-log slope %.4f, target %.1f +- 0.1", slope, target));
    CHECK(std::abs(slope - target) <= 0.1);
}

TEST_CASE("criterion 8: fast-balancing cost bound") {
    long violations = 0;
    long checked = 0;
    int max_gap = 0;
    auto scan = [&](const std::vector<ReplicationRecord>& records, bool analytic) {
        for (const ReplicationRecord& r : records) {
            if (r.failed) continue;
            ++checked;
            max_gap = std::max(max_gap, r.lookahead_gap);
            const int gap = analytic ? 1 : r.lookahead_gap;
            if (analytic && r.lookahead_gap != 1) ++violations;
            if (r.evaluations > r.n_fb + gap + 1) ++violations;
        }
    };
    scan(shared().oracle_records, true);
    scan(shared().tail_records, true);
    scan(shared().split_records, false);
    const bool pass = violations == 0;
    report(8, "cost bound", pass,
           fmt("%ld records, %ld violations of evaluations <= n_fb + K + 1, max gap %d", checked,
               violations, max_gap));
    CHECK(violations == 0);
    CHECK(checked >= 21000);
}

TEST_CASE("criterion 9: determinism across worker counts") {
    ExperimentConfig cfg = config_a(1000, 42);
    const std::string canonical = records_to_csv(shared().oracle_records);
    bool pass = true;
    for (int workers : {2, 5}) {
        cfg.workers = workers;
        std::vector<ReplicationRecord> records;
        run_experiment(cfg, &records);
        const bool ok = records_to_csv(records) == canonical;
        pass = pass && ok;
        CHECK(ok);
    }
    report(9, "worker determinism", pass,
           fmt("CSV of %d records byte-identical for workers {1, 2, 5}", 1000));
}
