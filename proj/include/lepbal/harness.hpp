#pragma once

// Seeded Monte Carlo experiments over the sequence model: each replication
// draws its own instance from (base_seed, rep_index), runs the selection
// rule(s), and records the exact squared error of the chosen reconstruction.
// Replications are independent work items; records land in a slot per
// replication and aggregation runs serially in index order, so summaries are
// identical for any worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lepbal/analysis.hpp"
#include "lepbal/balancing.hpp"
#include "lepbal/model.hpp"
#include "lepbal/noise.hpp"
#include "lepbal/schedule.hpp"

namespace lepbal {

enum class SelectionRule { Fast, Classic, Both };

std::string to_string(SelectionRule rule);
SelectionRule rule_from_string(const std::string& name);

enum class RecordFormat { Csv, Json };

struct OutputConfig {
    std::string records_path;  // empty = do not write
    std::string summary_path;  // empty = do not write
    RecordFormat format = RecordFormat::Csv;
};

struct ExperimentConfig {
    ModelParams params;
    long k_max = 0;
    BalancingConfig balancing;
    int reps = 1;
    std::uint64_t base_seed = 0;
    RhoMode rho_mode = RhoMode::AnalyticStochastic;
    SelectionRule rule = SelectionRule::Fast;
    int workers = 0;               // 0 = hardware concurrency
    int outlier_gap = 3;           // |n_sel - n_opt| >= outlier_gap counts as outlier
    std::vector<int> probe_levels; // levels at which b (and rho ratios) are sampled per replication
    double probe_tau = 1.0;        // threshold for the tail frequencies at the probe levels
    OutputConfig outputs;
};

// Validates params, balancing and bookkeeping fields, and checks that the
// finite surrogate is adequate: the neglected prior tail
// eta^2 sum_{k > k_max} k^-2gamma must stay below 1e-3 of the minimal
// expected error.
ExperimentConfig validate_experiment_config(const ExperimentConfig& raw);

struct ReplicationRecord {
    int rep_index = 0;
    std::uint64_t seed = 0;
    int n_fb = -1;
    std::optional<int> n_star;
    int n_opt = -1;                // empirical argmin, same for every replication
    double err_sq_selected = 0.0;  // ||x_{n_sel}^d - x||^2 for this draw
    double min_expected_err_sq = 0.0;
    double ratio = 0.0;
    int evaluations = 0;
    int lookahead_gap = 0;
    bool failed = false;
    std::vector<double> b_probe;    // b at config.probe_levels
    std::vector<double> rho_ratio;  // split mode: rho~(n)^2 / rho(n)^2 at probe_levels
};

struct TailStat {
    int level = 0;
    double tau = 0.0;
    long over_count = 0;
    long under_count = 0;
    double freq_over = 0.0;
    double freq_under = 0.0;
    double se_over = 0.0;   // binomial standard errors
    double se_under = 0.0;
    double bound_over = 0.0;   // K sqrt(2) e^(-tau^2); NaN when level <= n_opt
    double bound_under = 0.0;  // undershoot bound; NaN when level >= n_opt
};

struct ExperimentSummary {
    int reps = 0;
    std::uint64_t base_seed = 0;
    long k_max = 0;
    int n_max = 0;
    int workers_used = 1;
    RhoMode rho_mode = RhoMode::AnalyticStochastic;
    SelectionRule rule = SelectionRule::Fast;
    double mean_ratio = 0.0;  // empirical oracle constant
    double ratio_se = 0.0;
    std::vector<long> histogram;  // selected level counts, 0..n_max
    std::vector<TailStat> tails;
    std::vector<int> probe_levels;
    std::vector<double> rho_ratio_mean;  // split mode, aligned with probe_levels
    std::vector<double> rho_ratio_se;
    long outlier_count = 0;
    int outlier_gap = 3;
    long failure_count = 0;
    int n_opt_empirical = 0;
    OptimalLevel n_opt_closed;
    double min_expected_err_sq = 0.0;
    std::vector<double> expected_err_sq;  // per level
    SandwichConstants constants;
    ConditionReport conditions;
    int lookahead_gap = 0;  // K implied by sigma on the analytic rho
    double runtime_seconds = 0.0;
};

// Immutable precomputed state shared by all replications of one experiment.
class ExperimentContext {
public:
    explicit ExperimentContext(const ExperimentConfig& config);

    ExperimentConfig config;
    Grid grid;
    CoefficientScales scales;
    NoiseBehavior analytic_rho;       // also the reference for split-mode ratios
    NoiseBehavior deterministic_rho;
    std::vector<double> expected_err;
    double min_expected_err_sq = 0.0;
    int n_opt_emp = 0;
    OptimalLevel closed;
    int gap_K = 0;

    const NoiseBehavior& shared_rho() const;  // analytic or deterministic per config
};

ReplicationRecord run_replication(const ExperimentContext& ctx, int rep_index);

ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 std::vector<ReplicationRecord>* records_out = nullptr);

// Fixed record schema, one row per replication:
// rep_index,seed,n_fb,n_star,n_opt,err_sq_selected,min_expected_err_sq,ratio,evaluations
// Doubles use shortest round-trip formatting; n_star is empty when the
// classic rule did not run; line feed endings.
std::string records_to_csv(const std::vector<ReplicationRecord>& records);
std::vector<ReplicationRecord> records_from_csv(const std::string& text);
std::string records_to_json(const std::vector<ReplicationRecord>& records);

std::string summary_to_json(const ExperimentSummary& summary);

// Config file form: keys mirror ExperimentConfig field names exactly.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

// Writers throw IoFailure with the path in the message.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace lepbal
