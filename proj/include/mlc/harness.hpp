#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mlc/data.hpp"
#include "mlc/linear.hpp"
#include "mlc/metrics.hpp"
#include "mlc/models.hpp"

namespace mlc::harness {

/// Method names accepted by `run`: ic cc ecc mcc ebcc ct ect cdt fs lead.
const std::vector<std::string>& known_methods();

/// Experiment description. Serialized as flat `key = value` lines:
///
///   name = easy-bn              dataset = path.csv     label_count = 6
///   generator = bn|local        gen.<param> = value
///   methods = ic,ct,ecc         <method>.<param> = value
///   folds = 5                   seed = 1               workers = 1
///   out = results.csv           format = csv|json
///   sgd.epochs / sgd.lr / sgd.l2
///
/// `#` starts a comment. Later keys override earlier ones.
struct ExperimentConfig {
    std::string name;
    std::string dataset_path;
    std::size_t label_count = 0;
    std::string generator;
    std::map<std::string, std::string> generator_params;
    std::vector<std::string> methods;
    std::map<std::string, std::string> method_params;  // "ct.width" -> "3"
    std::size_t folds = 5;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::string out;
    std::string format = "csv";
    SgdConfig sgd;

    /// Applies one `key = value` setting; throws ConfigError on unknown keys.
    void set(std::string_view key, std::string_view value);
    /// Checks method names, per-method parameters and generator parameters.
    void validate() const;
    std::string display_name() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

/// Loads or generates the configured dataset.
Dataset materialize_dataset(const ExperimentConfig& config);

/// Trains one named method with its parameters from `config`.
MultiLabelModel train_method(const std::string& method, const ExperimentConfig& config,
                             const Dataset& train, std::uint64_t seed);

/// Label dependence structure a method would use, as parent (or neighbour) sets.
ParentSets method_structure(const std::string& method, const ExperimentConfig& config,
                            const Dataset& dataset, std::uint64_t seed);

struct MethodResult {
    EvaluationReport mean;
    EvaluationReport stddev;
    std::vector<EvaluationReport> folds;
};

/// k-fold cross validation of every configured method. Scores depend only
/// on the config (never on `workers`).
std::vector<MethodResult> run_experiment(const ExperimentConfig& config);
std::vector<MethodResult> run_experiment(const ExperimentConfig& config, const Dataset& dataset);

/// CSV rows (`dataset,method,hamming,exact,jaccard,train_s,test_s`) of fold means.
std::string format_results_csv(const std::vector<MethodResult>& results);
std::string format_results_json(const std::vector<MethodResult>& results);
/// Human-readable mean +- std table.
std::string format_results_table(const std::vector<MethodResult>& results);

struct RankTable {
    std::vector<std::string> methods;
    std::vector<std::string> datasets;
    std::vector<std::string> metrics;
    std::vector<std::vector<double>> ranks;  // [metric][method]
    double critical_distance = 0.0;          // 0 when fewer than two methods
};

RankTable rank_report(const std::vector<EvaluationReport>& reports, double q_p);
RankTable rank_report_files(const std::vector<std::filesystem::path>& files, double q_p);
std::string format_rank_table(const RankTable& table);

/// Writes the generated dataset CSV to `out`; the bn generator also writes
/// `<out>.truth.txt` (adjacency format) and local writes `<out>.scenario.json`.
void generate_command(const std::string& generator,
                      const std::map<std::string, std::string>& params,
                      const std::filesystem::path& out);

}  // namespace mlc::harness
