// Command-line laboratory around the balancing-principle library: closed-form
// constants, optimal levels, seeded experiments, tail tables and delta sweeps.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lepbal/errors.hpp"
#include "lepbal/estimator.hpp"
#include "lepbal/harness.hpp"

namespace {

using nlohmann::json;
using namespace lepbal;

struct ParamFlags {
    double gamma = 0, lambda = 0, epsilon = 0;
    double eta = 1.0, delta = 1.0;
    double omega0 = 0, omega = 0;

    ModelParams to_params() const { return {gamma, lambda, epsilon, eta, delta, omega0, omega}; }
};

void add_shape_options(CLI::App* cmd, ParamFlags& f) {
    cmd->add_option("--gamma", f.gamma, "prior decay exponent")->required();
    cmd->add_option("--lambda", f.lambda, "singular value decay exponent")->required();
    cmd->add_option("--epsilon", f.epsilon, "noise color exponent")->required();
    cmd->add_option("--omega0", f.omega0, "grid offset")->required();
    cmd->add_option("--omega", f.omega, "grid ratio")->required();
}

int cmd_constants(const ParamFlags& f) {
    const ModelParams params = validate_params(f.to_params());
    const SandwichConstants c = sandwich_constants(params);
    const ConditionReport r = check_conditions(params);
    const json out{{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3},
                   {"c4", c.c4}, {"c5", c.c5}, {"c6", c.c6},
                   {"conditions",
                    json{{"hi1", r.hi1}, {"hi2", r.hi2}, {"hi3", r.hi3}, {"hi5", r.hi5},
                         {"lhs_hi1", r.lhs_hi1}, {"lhs_hi2", r.lhs_hi2},
                         {"lhs_hi3", r.lhs_hi3}, {"lhs_hi5", r.lhs_hi5}}}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_nopt(const ParamFlags& f, long k_max) {
    const ModelParams params = validate_params(f.to_params());
    const Grid grid = make_grid(params, k_max);
    const OptimalLevel opt = n_opt_closed(params, grid.n_max);
    json out{{"s_star", opt.s_star},
             {"n_opt_real", opt.n_opt_real},
             {"n_opt_empirical", n_opt_empirical(params, grid)},
             {"n_max", grid.n_max}};
    if (opt.exists)
        out["n_opt"] = opt.n_opt;
    else
        out["n_opt"] = nullptr;  // omega0 too big for this delta
    std::cout << out.dump(2) << "\n";
    return 0;
}

// Flags shared by simulate / tails / sweep; `*_set` mirrors option counts so
// only flags the user actually passed override the config file.
struct RunFlags {
    std::string config_path;
    int reps = -1;
    std::uint64_t seed = 0;
    std::string rho, rule, out, format;
    double tau = 0, sigma = 0, kappa = 0;
    int workers = -1;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* tau_opt = nullptr;
    CLI::Option* sigma_opt = nullptr;
    CLI::Option* kappa_opt = nullptr;
};

void add_common_options(CLI::App* cmd, RunFlags& f, bool balancing_overrides) {
    cmd->add_option("--config", f.config_path, "experiment config (JSON)")->required();
    f.seed_opt = cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--rho", f.rho, "analytic|deterministic|split");
    cmd->add_option("--workers", f.workers, "worker threads (0 = hardware)");
    if (balancing_overrides) {
        cmd->add_option("--reps", f.reps, "replications");
        cmd->add_option("--rule", f.rule, "fast|classic|both");
        f.tau_opt = cmd->add_option("--tau", f.tau, "fast threshold");
        f.sigma_opt = cmd->add_option("--sigma", f.sigma, "look-ahead ratio");
        f.kappa_opt = cmd->add_option("--kappa", f.kappa, "classic threshold");
    }
}

ExperimentConfig merged_config(const RunFlags& f) {
    ExperimentConfig cfg = config_from_json(read_text_file(f.config_path));
    if (f.reps >= 0) cfg.reps = f.reps;
    if (f.seed_opt && f.seed_opt->count() > 0) cfg.base_seed = f.seed;
    if (!f.rho.empty()) cfg.rho_mode = rho_mode_from_string(f.rho);
    if (!f.rule.empty()) cfg.rule = rule_from_string(f.rule);
    if (f.tau_opt && f.tau_opt->count() > 0) cfg.balancing.tau = f.tau;
    if (f.sigma_opt && f.sigma_opt->count() > 0) cfg.balancing.sigma = f.sigma;
    if (f.kappa_opt && f.kappa_opt->count() > 0) cfg.balancing.kappa = f.kappa;
    if (f.workers >= 0) cfg.workers = f.workers;
    if (!f.out.empty()) {
        cfg.outputs.records_path = f.out;
        cfg.outputs.summary_path = f.out + ".summary.json";
    }
    if (!f.format.empty()) {
        if (f.format == "csv")
            cfg.outputs.format = RecordFormat::Csv;
        else if (f.format == "json")
            cfg.outputs.format = RecordFormat::Json;
        else
            throw ConstraintViolation("--format in {csv, json}");
    }
    return cfg;
}

int cmd_simulate(const RunFlags& f) {
    const ExperimentConfig cfg = merged_config(f);
    std::vector<ReplicationRecord> records;
    const ExperimentSummary summary = run_experiment(cfg, &records);
    if (!cfg.outputs.records_path.empty()) {
        const std::string body = cfg.outputs.format == RecordFormat::Csv
                                     ? records_to_csv(records)
                                     : records_to_json(records);
        write_text_file(cfg.outputs.records_path, body);
    }
    const std::string summary_json = summary_to_json(summary);
    if (!cfg.outputs.summary_path.empty()) write_text_file(cfg.outputs.summary_path, summary_json);
    std::cout << summary_json;
    return 0;
}

int cmd_tails(const RunFlags& f, const std::vector<int>& levels, double tau, int reps) {
    ExperimentConfig cfg = merged_config(f);
    cfg.probe_levels = levels;
    cfg.probe_tau = tau;
    cfg.reps = reps;
    const ExperimentSummary summary = run_experiment(cfg);
    std::cout << "level,tau,freq_over,se_over,bound_over,freq_under,se_under,bound_under\n";
    for (const TailStat& t : summary.tails) {
        std::printf("%d,%g,%g,%g,%g,%g,%g,%g\n", t.level, t.tau, t.freq_over, t.se_over,
                    t.bound_over, t.freq_under, t.se_under, t.bound_under);
    }
    return 0;
}

int cmd_sweep(const RunFlags& f, const std::vector<double>& delta_grid, int reps) {
    const ExperimentConfig base = merged_config(f);
    std::cout << "delta,s_star,n_opt_real,n_opt_empirical,min_expected_err_sq";
    if (reps > 0) std::cout << ",mean_ratio,ratio_se";
    std::cout << "\n";
    for (const double d : delta_grid) {
        ExperimentConfig cfg = base;
        cfg.params.delta = d;
        validate_params(cfg.params);
        const Grid grid = make_grid(cfg.params, cfg.k_max);
        const OptimalLevel opt = n_opt_closed(cfg.params, grid.n_max);
        double min_err = expected_error_sq(cfg.params, grid, 0);
        for (int n = 1; n <= grid.n_max; ++n)
            min_err = std::min(min_err, expected_error_sq(cfg.params, grid, n));
        std::printf("%g,%.17g,%.17g,%d,%.17g", d, opt.s_star, opt.n_opt_real,
                    n_opt_empirical(cfg.params, grid), min_err);
        if (reps > 0) {
            cfg.reps = reps;
            const ExperimentSummary s = run_experiment(cfg);
            std::printf(",%.17g,%.17g", s.mean_ratio, s.ratio_se);
        }
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral cut-off regularization with balancing-principle level selection"};
    app.require_subcommand(1);

    ParamFlags shape;
    long k_max = 0;
    RunFlags run;
    std::vector<int> tail_levels;
    double tail_tau = 1.0;
    int tail_reps = 0;
    std::vector<double> delta_grid;
    int sweep_reps = 0;

    CLI::App* constants = app.add_subcommand("constants", "print c1..c6 and the side conditions");
    add_shape_options(constants, shape);

    CLI::App* nopt = app.add_subcommand("nopt", "closed-form and empirical optimal level");
    add_shape_options(nopt, shape);
    nopt->add_option("--eta", shape.eta, "prior scale")->required();
    nopt->add_option("--delta", shape.delta, "noise scale")->required();
    nopt->add_option("--k-max", k_max, "surrogate dimension")->required();

    CLI::App* simulate = app.add_subcommand("simulate", "run a seeded experiment");
    add_common_options(simulate, run, true);
    simulate->add_option("--out", run.out, "records path (summary lands at PATH.summary.json)");
    simulate->add_option("--format", run.format, "records format: csv|json");

    CLI::App* tails = app.add_subcommand("tails", "empirical vs theoretical tail table");
    add_common_options(tails, run, false);
    tails->add_option("--levels", tail_levels, "probe levels")->required()->delimiter(',');
    tails->add_option("--tau", tail_tau, "probe threshold")->required();
    tails->add_option("--reps", tail_reps, "replications")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "per-delta summaries for rate checks");
    add_common_options(sweep, run, false);
    sweep->add_option("--delta-grid", delta_grid, "noise levels")->required()->delimiter(',');
    sweep->add_option("--reps", sweep_reps, "replications per delta (0 = analytic only)");

    try {
        app.parse(argc, argv);
        if (*constants) return cmd_constants(shape);
        if (*nopt) return cmd_nopt(shape, k_max);
        if (*simulate) return cmd_simulate(run);
        if (*tails) return cmd_tails(run, tail_levels, tail_tau, tail_reps);
        if (*sweep) return cmd_sweep(run, delta_grid, sweep_reps);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const lepbal::IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {  // constraint/precondition failures
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
