#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "lepbal/errors.hpp"
#include "lepbal/harness.hpp"

namespace lepbal {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form; what the CSV schema relies on.
std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw IoFailure(std::string("bad CSV field for ") + what + ": '" + std::string(field) + "'");
    return v;
}

long long parse_int(std::string_view field, const char* what) {
    long long v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw IoFailure(std::string("bad CSV field for ") + what + ": '" + std::string(field) + "'");
    return v;
}

std::uint64_t parse_u64(std::string_view field, const char* what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw IoFailure(std::string("bad CSV field for ") + what + ": '" + std::string(field) + "'");
    return v;
}

constexpr const char* kCsvHeader =
    "rep_index,seed,n_fb,n_star,n_opt,err_sq_selected,min_expected_err_sq,ratio,evaluations";

json record_to_json(const ReplicationRecord& r) {
    json j{{"rep_index", r.rep_index},
           {"seed", r.seed},
           {"n_fb", r.n_fb},
           {"n_opt", r.n_opt},
           {"err_sq_selected", r.err_sq_selected},
           {"min_expected_err_sq", r.min_expected_err_sq},
           {"ratio", r.ratio},
           {"evaluations", r.evaluations},
           {"lookahead_gap", r.lookahead_gap},
           {"failed", r.failed}};
    if (r.n_star) j["n_star"] = *r.n_star;
    if (!r.b_probe.empty()) j["b_probe"] = r.b_probe;
    if (!r.rho_ratio.empty()) j["rho_ratio"] = r.rho_ratio;
    return j;
}

}  // namespace

std::string records_to_csv(const std::vector<ReplicationRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const ReplicationRecord& r : records) {
        out += std::to_string(r.rep_index);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += std::to_string(r.n_fb);
        out += ',';
        if (r.n_star) out += std::to_string(*r.n_star);
        out += ',';
        out += std::to_string(r.n_opt);
        out += ',';
        out += format_double(r.err_sq_selected);
        out += ',';
        out += format_double(r.min_expected_err_sq);
        out += ',';
        out += format_double(r.ratio);
        out += ',';
        out += std::to_string(r.evaluations);
        out += '\n';
    }
    return out;
}

std::vector<ReplicationRecord> records_from_csv(const std::string& text) {
    std::vector<ReplicationRecord> records;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw IoFailure("CSV header mismatch: '" + line + "'");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            const std::size_t comma = rest.find(',');
            if (comma == std::string_view::npos) {
                fields.push_back(rest);
                break;
            }
            fields.push_back(rest.substr(0, comma));
            rest = rest.substr(comma + 1);
        }
        if (fields.size() != 9) throw IoFailure("CSV row with " + std::to_string(fields.size()) + " fields");
        ReplicationRecord r;
        r.rep_index = static_cast<int>(parse_int(fields[0], "rep_index"));
        r.seed = parse_u64(fields[1], "seed");
        r.n_fb = static_cast<int>(parse_int(fields[2], "n_fb"));
        if (!fields[3].empty()) r.n_star = static_cast<int>(parse_int(fields[3], "n_star"));
        r.n_opt = static_cast<int>(parse_int(fields[4], "n_opt"));
        r.err_sq_selected = parse_double(fields[5], "err_sq_selected");
        r.min_expected_err_sq = parse_double(fields[6], "min_expected_err_sq");
        r.ratio = parse_double(fields[7], "ratio");
        r.evaluations = static_cast<int>(parse_int(fields[8], "evaluations"));
        records.push_back(std::move(r));
    }
    return records;
}

std::string records_to_json(const std::vector<ReplicationRecord>& records) {
    json arr = json::array();
    for (const ReplicationRecord& r : records) arr.push_back(record_to_json(r));
    return arr.dump(2) + "\n";
}

std::string summary_to_json(const ExperimentSummary& s) {
    json tails = json::array();
    for (const TailStat& t : s.tails) {
        tails.push_back(json{{"level", t.level},
                             {"tau", t.tau},
                             {"over_count", t.over_count},
                             {"under_count", t.under_count},
                             {"freq_over", t.freq_over},
                             {"freq_under", t.freq_under},
                             {"se_over", t.se_over},
                             {"se_under", t.se_under},
                             {"bound_over", t.bound_over},
                             {"bound_under", t.bound_under}});
    }
    json j{{"reps", s.reps},
           {"base_seed", s.base_seed},
           {"k_max", s.k_max},
           {"n_max", s.n_max},
           {"workers_used", s.workers_used},
           {"rho_mode", to_string(s.rho_mode)},
           {"rule", to_string(s.rule)},
           {"mean_ratio", s.mean_ratio},
           {"ratio_se", s.ratio_se},
           {"histogram", s.histogram},
           {"tails", tails},
           {"probe_levels", s.probe_levels},
           {"rho_ratio_mean", s.rho_ratio_mean},
           {"rho_ratio_se", s.rho_ratio_se},
           {"outlier_count", s.outlier_count},
           {"outlier_gap", s.outlier_gap},
           {"failure_count", s.failure_count},
           {"n_opt_empirical", s.n_opt_empirical},
           {"n_opt_closed",
            json{{"s_star", s.n_opt_closed.s_star},
                 {"n_opt_real", s.n_opt_closed.n_opt_real},
                 {"exists", s.n_opt_closed.exists},
                 {"n_opt", s.n_opt_closed.n_opt}}},
           {"min_expected_err_sq", s.min_expected_err_sq},
           {"expected_err_sq", s.expected_err_sq},
           {"constants",
            json{{"c1", s.constants.c1},
                 {"c2", s.constants.c2},
                 {"c3", s.constants.c3},
                 {"c4", s.constants.c4},
                 {"c5", s.constants.c5},
                 {"c6", s.constants.c6}}},
           {"conditions",
            json{{"hi1", s.conditions.hi1},
                 {"hi2", s.conditions.hi2},
                 {"hi3", s.conditions.hi3},
                 {"hi5", s.conditions.hi5},
                 {"lhs_hi1", s.conditions.lhs_hi1},
                 {"lhs_hi2", s.conditions.lhs_hi2},
                 {"lhs_hi3", s.conditions.lhs_hi3},
                 {"lhs_hi5", s.conditions.lhs_hi5}}},
           {"lookahead_gap", s.lookahead_gap},
           {"runtime_seconds", s.runtime_seconds}};
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoFailure(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        const json& p = j.at("params");
        cfg.params.gamma = p.at("gamma").get<double>();
        cfg.params.lambda = p.at("lambda").get<double>();
        cfg.params.epsilon = p.at("epsilon").get<double>();
        cfg.params.eta = p.at("eta").get<double>();
        cfg.params.delta = p.at("delta").get<double>();
        cfg.params.omega0 = p.at("omega0").get<double>();
        cfg.params.omega = p.at("omega").get<double>();
        cfg.k_max = j.at("k_max").get<long>();
        if (j.contains("balancing")) {
            const json& b = j.at("balancing");
            if (b.contains("sigma")) cfg.balancing.sigma = b.at("sigma").get<double>();
            if (b.contains("kappa")) cfg.balancing.kappa = b.at("kappa").get<double>();
            if (b.contains("tau")) cfg.balancing.tau = b.at("tau").get<double>();
        }
        if (j.contains("reps")) cfg.reps = j.at("reps").get<int>();
        if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
        if (j.contains("rho_mode")) cfg.rho_mode = rho_mode_from_string(j.at("rho_mode").get<std::string>());
        if (j.contains("rule")) cfg.rule = rule_from_string(j.at("rule").get<std::string>());
        if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
        if (j.contains("outlier_gap")) cfg.outlier_gap = j.at("outlier_gap").get<int>();
        if (j.contains("probe_levels")) cfg.probe_levels = j.at("probe_levels").get<std::vector<int>>();
        if (j.contains("probe_tau")) cfg.probe_tau = j.at("probe_tau").get<double>();
        if (j.contains("outputs")) {
            const json& o = j.at("outputs");
            if (o.contains("records_path")) cfg.outputs.records_path = o.at("records_path").get<std::string>();
            if (o.contains("summary_path")) cfg.outputs.summary_path = o.at("summary_path").get<std::string>();
            if (o.contains("format")) {
                const std::string f = o.at("format").get<std::string>();
                if (f == "csv")
                    cfg.outputs.format = RecordFormat::Csv;
                else if (f == "json")
                    cfg.outputs.format = RecordFormat::Json;
                else
                    throw ConstraintViolation("outputs.format in {csv, json}");
            }
        }
    } catch (const json::exception& e) {
        throw IoFailure(std::string("config field error: ") + e.what());
    }
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j{{"params",
            json{{"gamma", cfg.params.gamma},
                 {"lambda", cfg.params.lambda},
                 {"epsilon", cfg.params.epsilon},
                 {"eta", cfg.params.eta},
                 {"delta", cfg.params.delta},
                 {"omega0", cfg.params.omega0},
                 {"omega", cfg.params.omega}}},
           {"k_max", cfg.k_max},
           {"balancing",
            json{{"sigma", cfg.balancing.sigma},
                 {"kappa", cfg.balancing.kappa},
                 {"tau", cfg.balancing.tau}}},
           {"reps", cfg.reps},
           {"base_seed", cfg.base_seed},
           {"rho_mode", to_string(cfg.rho_mode)},
           {"rule", to_string(cfg.rule)},
           {"workers", cfg.workers},
           {"outlier_gap", cfg.outlier_gap},
           {"probe_levels", cfg.probe_levels},
           {"probe_tau", cfg.probe_tau},
           {"outputs",
            json{{"records_path", cfg.outputs.records_path},
                 {"summary_path", cfg.outputs.summary_path},
                 {"format", cfg.outputs.format == RecordFormat::Csv ? "csv" : "json"}}}};
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoFailure("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoFailure("read failed: " + path);
    return buf.str();
}

}  // namespace lepbal
