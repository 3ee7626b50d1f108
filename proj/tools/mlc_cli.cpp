// mlc: generate datasets, run cross-validated benchmarks, rank results and
// dump learned label structures.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlc/errors.hpp"
#include "mlc/harness.hpp"
#include "mlc/structure.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw mlc::IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw mlc::IoError("write failed: " + path);
}

struct RunFlags {
    std::string config;
    std::string dataset;
    std::size_t labels = 0;
    std::string generator;
    std::vector<std::string> methods;
    std::vector<std::string> settings;
    std::optional<std::size_t> folds;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::string out;
    std::string format;
};

mlc::harness::ExperimentConfig build_config(const RunFlags& f) {
    mlc::harness::ExperimentConfig cfg;
    if (!f.config.empty()) cfg = mlc::harness::load_config(f.config);
    if (!f.dataset.empty()) cfg.set("dataset", f.dataset);
    if (f.labels) cfg.set("label_count", std::to_string(f.labels));
    if (!f.generator.empty()) cfg.set("generator", f.generator);
    if (!f.methods.empty()) {
        std::string joined;
        for (const auto& m : f.methods) joined += (joined.empty() ? "" : ",") + m;
        cfg.set("methods", joined);
    }
    for (const auto& kv : f.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw mlc::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (f.folds) cfg.folds = *f.folds;
    if (f.seed) cfg.seed = *f.seed;
    if (f.workers) cfg.workers = *f.workers;
    if (!f.out.empty()) cfg.out = f.out;
    if (!f.format.empty()) cfg.format = f.format;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-label classification toolkit: classifier chains and trellises"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset");
    std::string generator;
    std::string gen_out;
    std::map<std::string, std::string> gen_params;
    gen->add_option("generator", generator, "bn | local")->required()->check(
        CLI::IsMember({"bn", "local"}));
    gen->add_option("--out", gen_out, "Output CSV path (default <generator>.csv)");
    for (const char* key : {"n", "d", "l", "t", "alpha", "sigma2", "delta", "seed", "w",
                            "sensors", "m", "eps_fn", "eps_fp"}) {
        gen->add_option_function<std::string>(
            std::string("--") + key, [&gen_params, key](const std::string& v) { gen_params[key] = v; },
            std::string("Generator parameter ") + key);
    }

    // run
    auto* run = app.add_subcommand("run", "Cross-validate methods on a dataset");
    RunFlags rf;
    run->add_option("--config", rf.config, "Experiment config file (key = value lines)");
    run->add_option("--data", rf.dataset, "Dataset CSV path");
    run->add_option("--labels", rf.labels, "Number of label columns in --data");
    run->add_option("--generator", rf.generator, "Generate the dataset instead (bn | local)");
    run->add_option("--method", rf.methods, "Method(s) to evaluate; repeatable or comma list")
        ->delimiter(',');
    run->add_option("--set", rf.settings, "Config override key=value; repeatable");
    run->add_option("--folds", rf.folds, "Cross-validation folds");
    run->add_option("--seed", rf.seed, "Global seed");
    run->add_option("--workers", rf.workers, "Concurrent fold/method tasks");
    run->add_option("--out", rf.out, "Result file (default: stdout)");
    run->add_option("--format", rf.format, "csv | json");
    bool quiet = false;
    run->add_flag("--quiet", quiet, "Do not print the summary table to stderr");

    // rank
    auto* rank = app.add_subcommand("rank", "Average ranks and Nemenyi critical distance");
    std::vector<std::string> rank_files;
    double qp = 0.0;
    std::string rank_out;
    rank->add_option("reports", rank_files, "Result CSV files")->required();
    rank->add_option("--qp", qp, "q_p value from a studentized range table")->required();
    rank->add_option("--out", rank_out, "Output path (default: stdout)");

    // dump-structure
    auto* dump = app.add_subcommand("dump-structure", "Print the label structure a method learns");
    RunFlags df;
    std::string dump_method = "ct";
    dump->add_option("--config", df.config, "Experiment config file");
    dump->add_option("--data", df.dataset, "Dataset CSV path");
    dump->add_option("--labels", df.labels, "Number of label columns in --data");
    dump->add_option("--generator", df.generator, "Generate the dataset instead (bn | local)");
    dump->add_option("--method", dump_method, "ic|cc|ecc|mcc|ebcc|ct|ect|cdt|fs|lead");
    dump->add_option("--set", df.settings, "Config override key=value; repeatable");
    dump->add_option("--seed", df.seed, "Global seed");
    dump->add_option("--out", df.out, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed()) {
            const std::string out = gen_out.empty() ? generator + ".csv" : gen_out;
            mlc::harness::generate_command(generator, gen_params, out);
            std::cerr << "wrote " << out << "\n";
        } else if (run->parsed()) {
            const auto cfg = build_config(rf);
            const auto results = mlc::harness::run_experiment(cfg);
            const std::string text = cfg.format == "json"
                                         ? mlc::harness::format_results_json(results)
                                         : mlc::harness::format_results_csv(results);
            write_output(cfg.out, text);
            if (!quiet) std::cerr << mlc::harness::format_results_table(results);
        } else if (rank->parsed()) {
            std::vector<std::filesystem::path> paths(rank_files.begin(), rank_files.end());
            write_output(rank_out, mlc::harness::format_rank_table(
                                       mlc::harness::rank_report_files(paths, qp)));
        } else if (dump->parsed()) {
            df.methods = {dump_method};
            const auto cfg = build_config(df);
            const auto data = mlc::harness::materialize_dataset(cfg);
            write_output(cfg.out, mlc::format_adjacency(mlc::harness::method_structure(
                                      dump_method, cfg, data, cfg.seed)));
        }
    } catch (const mlc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mlc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
