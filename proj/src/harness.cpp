#include "lepbal/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "lepbal/errors.hpp"
#include "lepbal/estimator.hpp"
#include "lepbal/power_sums.hpp"

namespace lepbal {

std::string to_string(SelectionRule rule) {
    switch (rule) {
        case SelectionRule::Fast: return "fast";
        case SelectionRule::Classic: return "classic";
        case SelectionRule::Both: return "both";
    }
    return "?";
}

SelectionRule rule_from_string(const std::string& name) {
    if (name == "fast") return SelectionRule::Fast;
    if (name == "classic") return SelectionRule::Classic;
    if (name == "both") return SelectionRule::Both;
    throw ConstraintViolation("rule in {fast, classic, both}");
}

ExperimentConfig validate_experiment_config(const ExperimentConfig& raw) {
    validate_params(raw.params);
    validate_config(raw.balancing);
    if (raw.reps < 1) throw ConstraintViolation("reps >= 1");
    if (raw.outlier_gap < 1) throw ConstraintViolation("outlier_gap >= 1");
    if (raw.workers < 0) throw ConstraintViolation("workers >= 0");
    const Grid grid = make_grid(raw.params, raw.k_max);
    for (int level : raw.probe_levels)
        if (level < 0 || level > grid.n_max) throw ConstraintViolation("probe_levels within [0, n_max]");
    // Finite-surrogate adequacy: the prior mass beyond k_max must be
    // negligible against the smallest achievable expected error.
    double min_err = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= grid.n_max; ++n)
        min_err = std::min(min_err, expected_error_sq(raw.params, grid, n));
    const double neglected =
        raw.params.eta * raw.params.eta * inverse_power_tail(2.0 * raw.params.gamma, raw.k_max + 1);
    if (!(neglected < 1e-3 * min_err))
        throw ConstraintViolation("k_max surrogate tail below 1e-3 of the minimal expected error");
    return raw;
}

ExperimentContext::ExperimentContext(const ExperimentConfig& cfg)
    : config(validate_experiment_config(cfg)),
      grid(make_grid(config.params, config.k_max)),
      scales(make_scales(config.params, config.k_max)),
      analytic_rho(NoiseBehavior::analytic_stochastic(config.params, grid)),
      deterministic_rho(NoiseBehavior::deterministic(config.params.delta, config.params.lambda, grid)) {
    expected_err.resize(static_cast<std::size_t>(grid.n_max) + 1);
    for (int n = 0; n <= grid.n_max; ++n)
        expected_err[static_cast<std::size_t>(n)] = expected_error_sq(config.params, grid, n);
    min_expected_err_sq = *std::min_element(expected_err.begin(), expected_err.end());
    n_opt_emp = n_opt_empirical(config.params, grid);
    closed = n_opt_closed(config.params, grid.n_max);
    gap_K = 0;
    for (int n = 0; n < grid.n_max; ++n)
        gap_K = std::max(gap_K, lookahead(grid, n, config.balancing.sigma, analytic_rho) - n);
}

const NoiseBehavior& ExperimentContext::shared_rho() const {
    return config.rho_mode == RhoMode::Deterministic ? deterministic_rho : analytic_rho;
}

ReplicationRecord run_replication(const ExperimentContext& ctx, int rep_index) {
    const ExperimentConfig& cfg = ctx.config;
    ReplicationRecord rec;
    rec.rep_index = rep_index;
    rec.seed = stream_seed(cfg.base_seed, static_cast<std::uint64_t>(rep_index));
    rec.n_opt = ctx.n_opt_emp;
    rec.min_expected_err_sq = ctx.min_expected_err_sq;

    ProblemInstance data;
    NoiseBehavior split_rho = ctx.analytic_rho;  // replaced in split mode
    if (cfg.rho_mode == RhoMode::SplitEstimate) {
        const SplitInstance split = draw_split(cfg.params, ctx.scales, cfg.k_max, rec.seed);
        data = split.combined();
        split_rho = NoiseBehavior::split_estimate(split, ctx.grid);
    } else {
        data = draw_problem(cfg.params, ctx.scales, cfg.k_max, rec.seed);
    }
    const NoiseBehavior& rho =
        cfg.rho_mode == RhoMode::SplitEstimate ? split_rho : ctx.shared_rho();

    int selected = -1;
    try {
        if (cfg.rule != SelectionRule::Classic) {
            const SelectionResult fast = fast_index(data, ctx.grid, cfg.balancing, rho);
            rec.n_fb = fast.index;
            rec.evaluations = fast.evaluations;
            rec.lookahead_gap = fast.lookahead_gap;
            selected = fast.index;
        }
        if (cfg.rule != SelectionRule::Fast) {
            const SelectionResult classic = classic_index(data, ctx.grid, cfg.balancing, rho);
            rec.n_star = classic.index;
            if (cfg.rule == SelectionRule::Classic) {
                rec.evaluations = classic.evaluations;
                rec.lookahead_gap = classic.lookahead_gap;
                selected = classic.index;
            }
        }
    } catch (const NoFastPoint&) {
        rec.failed = true;
    } catch (const NoBalancePoint&) {
        rec.failed = true;
    }

    if (!rec.failed) {
        if (cfg.rule != SelectionRule::Classic &&
            rec.evaluations > rec.n_fb + rec.lookahead_gap + 1)
            throw std::logic_error("fast balancing cost bound violated");
        const double err = error_norm(data, ctx.grid, selected);
        rec.err_sq_selected = err * err;
        rec.ratio = rec.err_sq_selected / rec.min_expected_err_sq;
    } else {
        rec.err_sq_selected = std::numeric_limits<double>::quiet_NaN();
        rec.ratio = std::numeric_limits<double>::quiet_NaN();
    }

    // Diagnostics at the probe levels; computed outside the selection scan so
    // they never count toward `evaluations`.
    rec.b_probe.reserve(cfg.probe_levels.size());
    for (int level : cfg.probe_levels)
        rec.b_probe.push_back(functional_b(data, ctx.grid, cfg.balancing, rho, level));
    if (cfg.rho_mode == RhoMode::SplitEstimate) {
        rec.rho_ratio.reserve(cfg.probe_levels.size());
        for (int level : cfg.probe_levels) {
            const double reference = ctx.analytic_rho(level);
            const double estimate = rho(level);
            rec.rho_ratio.push_back((estimate * estimate) / (reference * reference));
        }
    }
    return rec;
}

namespace {

// Neumaier compensated summation; used for all means so aggregation accuracy
// never depends on magnitude ordering.
class CompensatedSum {
public:
    void add(double value) {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value))
            comp_ += (sum_ - t) + value;
        else
            comp_ += (value - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double binomial_se(double freq, long n) {
    return n > 0 ? std::sqrt(freq * (1.0 - freq) / static_cast<double>(n)) : 0.0;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 std::vector<ReplicationRecord>* records_out) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentContext ctx(config);
    const int reps = ctx.config.reps;

    int workers = ctx.config.workers;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, reps);

    std::vector<ReplicationRecord> records(static_cast<std::size_t>(reps));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run_range = [&](int begin, int end) {
        try {
            for (int r = begin; r < end; ++r)
                records[static_cast<std::size_t>(r)] = run_replication(ctx, r);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    if (workers == 1) {
        run_range(0, reps);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const int begin = static_cast<int>(static_cast<long>(reps) * w / workers);
            const int end = static_cast<int>(static_cast<long>(reps) * (w + 1) / workers);
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    ExperimentSummary s;
    s.reps = reps;
    s.base_seed = ctx.config.base_seed;
    s.k_max = ctx.config.k_max;
    s.n_max = ctx.grid.n_max;
    s.workers_used = workers;
    s.rho_mode = ctx.config.rho_mode;
    s.rule = ctx.config.rule;
    s.probe_levels = ctx.config.probe_levels;
    s.outlier_gap = ctx.config.outlier_gap;
    s.n_opt_empirical = ctx.n_opt_emp;
    s.n_opt_closed = ctx.closed;
    s.min_expected_err_sq = ctx.min_expected_err_sq;
    s.expected_err_sq = ctx.expected_err;
    s.constants = sandwich_constants(ctx.config.params);
    s.conditions = check_conditions(ctx.config.params);
    s.lookahead_gap = ctx.gap_K;
    s.histogram.assign(static_cast<std::size_t>(ctx.grid.n_max) + 1, 0);

    CompensatedSum ratio_sum;
    long ok_count = 0;
    for (const ReplicationRecord& rec : records) {
        if (rec.failed) {
            ++s.failure_count;
            ++s.outlier_count;
            continue;
        }
        const int selected = ctx.config.rule == SelectionRule::Classic ? *rec.n_star : rec.n_fb;
        ++s.histogram[static_cast<std::size_t>(selected)];
        ratio_sum.add(rec.ratio);
        ++ok_count;
        if (std::abs(selected - rec.n_opt) >= ctx.config.outlier_gap) ++s.outlier_count;
    }
    s.mean_ratio = ok_count > 0 ? ratio_sum.value() / static_cast<double>(ok_count) : 0.0;
    if (ok_count > 1) {
        CompensatedSum sq;
        for (const ReplicationRecord& rec : records) {
            if (rec.failed) continue;
            const double d = rec.ratio - s.mean_ratio;
            sq.add(d * d);
        }
        s.ratio_se = std::sqrt(sq.value() / static_cast<double>(ok_count - 1) /
                               static_cast<double>(ok_count));
    }

    // Tail frequencies and theoretical bounds at the probe levels.
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < ctx.config.probe_levels.size(); ++i) {
        TailStat t;
        t.level = ctx.config.probe_levels[i];
        t.tau = ctx.config.probe_tau;
        for (const ReplicationRecord& rec : records) {
            if (rec.failed) continue;
            if (rec.b_probe[i] > t.tau) ++t.over_count;
            if (rec.b_probe[i] < t.tau) ++t.under_count;
        }
        t.freq_over = static_cast<double>(t.over_count) / static_cast<double>(reps);
        t.freq_under = static_cast<double>(t.under_count) / static_cast<double>(reps);
        t.se_over = binomial_se(t.freq_over, reps);
        t.se_under = binomial_se(t.freq_under, reps);
        t.bound_over =
            t.level > ctx.n_opt_emp ? tail_bound_overshoot(t.tau, std::max(ctx.gap_K, 1)) : nan;
        t.bound_under = t.level < ctx.n_opt_emp
                            ? tail_bound_undershoot(ctx.config.params, t.tau,
                                                    ctx.n_opt_emp - t.level, std::max(ctx.gap_K, 1))
                            : nan;
        s.tails.push_back(t);
    }

    // Split-mode unbiasedness diagnostics: mean of rho~^2/rho^2 per probe level.
    if (ctx.config.rho_mode == RhoMode::SplitEstimate) {
        for (std::size_t i = 0; i < ctx.config.probe_levels.size(); ++i) {
            CompensatedSum sum;
            for (const ReplicationRecord& rec : records) sum.add(rec.rho_ratio[i]);
            const double mean = sum.value() / static_cast<double>(reps);
            CompensatedSum sq;
            for (const ReplicationRecord& rec : records) {
                const double d = rec.rho_ratio[i] - mean;
                sq.add(d * d);
            }
            s.rho_ratio_mean.push_back(mean);
            s.rho_ratio_se.push_back(std::sqrt(
                sq.value() / static_cast<double>(reps - 1) / static_cast<double>(reps)));
        }
    }

    s.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (records_out) *records_out = std::move(records);
    return s;
}

}  // namespace lepbal
