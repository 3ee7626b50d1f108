#include "mlc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "mlc/errors.hpp"
#include "mlc/localization.hpp"
#include "mlc/rng.hpp"
#include "mlc/structure.hpp"

namespace mlc::harness {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty())
        throw ConfigError("'" + std::string(key) + "' expects a nonnegative integer, got '" +
                          std::string(value) + "'");
    return out;
}

double to_real(std::string_view key, std::string_view value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty() ||
        !std::isfinite(out))
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" +
                          std::string(value) + "'");
    return out;
}

std::string real_text(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        auto item = trim(text.substr(start, comma - start));
        if (!item.empty()) out.emplace_back(item);
        start = comma + 1;
    }
    return out;
}

// Stable per-method stream id, independent of the method's list position.
std::uint64_t name_stream(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ULL;
    return h;
}

const std::map<std::string, std::set<std::string>>& method_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"ic", {}},
        {"cc", {}},
        {"ecc", {"m"}},
        {"mcc", {"m"}},
        {"ebcc", {"m"}},
        {"ct", {"width", "pattern"}},
        {"ect", {"m", "width", "pattern"}},
        {"cdt", {"width", "t", "tc"}},
        {"fs", {"max_parents", "threshold"}},
        {"lead", {"max_parents", "threshold"}},
    };
    return keys;
}

const std::map<std::string, std::set<std::string>>& generator_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"bn", {"n", "d", "l", "t", "alpha", "sigma2", "delta", "seed"}},
        {"local", {"w", "sensors", "n", "m", "seed", "eps_fn", "eps_fp"}},
    };
    return keys;
}

const std::map<std::string, std::set<std::string>>& required_generator_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"bn", {"l", "d", "t"}},
        {"local", {"w"}},
    };
    return keys;
}

class Params {
public:
    Params(const std::map<std::string, std::string>& values, std::string prefix)
        : values_(values), prefix_(std::move(prefix)) {}

    std::uint64_t uint(const std::string& key, std::uint64_t fallback) const {
        auto it = values_.find(prefix_ + key);
        return it == values_.end() ? fallback : to_uint(it->first, it->second);
    }
    double real(const std::string& key, double fallback) const {
        auto it = values_.find(prefix_ + key);
        return it == values_.end() ? fallback : to_real(it->first, it->second);
    }
    std::string text(const std::string& key, std::string fallback) const {
        auto it = values_.find(prefix_ + key);
        return it == values_.end() ? fallback : it->second;
    }

private:
    const std::map<std::string, std::string>& values_;
    std::string prefix_;
};

BnParams bn_params(const std::map<std::string, std::string>& values, std::string prefix,
                   std::uint64_t default_seed) {
    Params p(values, std::move(prefix));
    BnParams out;
    out.n = p.uint("n", 1000);
    out.d = p.uint("d", 20);
    out.l = p.uint("l", 6);
    out.t = p.uint("t", 5);
    out.alpha = p.real("alpha", 0.0);
    out.sigma2 = p.real("sigma2", 1.0);
    out.delta = p.real("delta", 0.0);
    out.seed = p.uint("seed", default_seed);
    return out;
}

struct LocalParams {
    std::size_t w = 20;
    std::size_t sensors = 30;
    std::size_t n = 1000;
    std::size_t m = 1;
    std::uint64_t seed = 0;
    double eps_fn = 0.15;
    double eps_fp = 0.01;
};

LocalParams local_params(const std::map<std::string, std::string>& values, std::string prefix,
                         std::uint64_t default_seed) {
    Params p(values, std::move(prefix));
    LocalParams out;
    out.w = p.uint("w", 20);
    out.sensors = p.uint("sensors", 30);
    out.n = p.uint("n", 1000);
    out.m = p.uint("m", 1);
    out.seed = p.uint("seed", default_seed);
    out.eps_fn = p.real("eps_fn", 0.15);
    out.eps_fp = p.real("eps_fp", 0.01);
    return out;
}

void check_generator(const std::string& generator,
                     const std::map<std::string, std::string>& params, const std::string& prefix) {
    auto it = generator_keys().find(generator);
    if (it == generator_keys().end())
        throw ConfigError("unknown generator '" + generator + "' (expected bn or local)");
    for (const auto& [key, value] : params) {
        if (key.rfind(prefix, 0) != 0) continue;
        const std::string bare = key.substr(prefix.size());
        if (!it->second.count(bare))
            throw ConfigError("unknown parameter '" + bare + "' for generator " + generator);
    }
    for (const auto& key : required_generator_keys().at(generator))
        if (!params.count(prefix + key))
            throw ConfigError("generator " + generator + " requires parameter '" + key + "'");
}

Dataset generate_dataset(const std::string& generator,
                         const std::map<std::string, std::string>& params,
                         const std::string& prefix, std::uint64_t default_seed,
                         GroundTruthGraph* truth, localization::Scenario* scenario) {
    check_generator(generator, params, prefix);
    if (generator == "bn") {
        auto [data, graph] = generate_bn_dataset(bn_params(params, prefix, default_seed));
        if (truth) *truth = std::move(graph);
        return std::move(data);
    }
    const auto p = local_params(params, prefix, default_seed);
    if (p.n == 0) throw ConfigError("local generator needs n >= 1");
    const auto sc = localization::build_scenario(p.w, p.sensors, p.eps_fn, p.eps_fp);
    if (scenario) *scenario = sc;
    return localization::instances_to_dataset(
        sc, localization::generate_instances(sc, p.n, p.m, p.seed));
}

template <class Fn>
void run_tasks(std::size_t count, std::size_t workers, Fn&& fn) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), count);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    return static_cast<double>(ms) / 1000.0;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> names = {"ic", "cc",  "ecc", "mcc", "ebcc",
                                                   "ct", "ect", "cdt", "fs",  "lead"};
    return names;
}

void ExperimentConfig::set(std::string_view raw_key, std::string_view raw_value) {
    const std::string key(trim(raw_key));
    const std::string value(trim(raw_value));
    if (key == "name") name = value;
    else if (key == "dataset") dataset_path = value;
    else if (key == "label_count") label_count = to_uint(key, value);
    else if (key == "generator") generator = value;
    else if (key == "methods") methods = split_list(value);
    else if (key == "folds") folds = to_uint(key, value);
    else if (key == "seed") seed = to_uint(key, value);
    else if (key == "workers") workers = to_uint(key, value);
    else if (key == "out") out = value;
    else if (key == "format") format = value;
    else if (key == "sgd.epochs") sgd.epochs = static_cast<int>(to_uint(key, value));
    else if (key == "sgd.lr") sgd.learning_rate = to_real(key, value);
    else if (key == "sgd.l2") sgd.l2 = to_real(key, value);
    else if (key.rfind("gen.", 0) == 0) generator_params[key.substr(4)] = value;
    else if (auto dot = key.find('.'); dot != std::string::npos &&
                                       method_keys().count(key.substr(0, dot)))
        method_params[key] = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

void ExperimentConfig::validate() const {
    if (methods.empty()) throw ConfigError("at least one method is required");
    for (const auto& m : methods)
        if (!method_keys().count(m)) throw ConfigError("unknown method '" + m + "'");
    for (const auto& [key, value] : method_params) {
        const auto dot = key.find('.');
        const std::string method = key.substr(0, dot);
        const std::string param = key.substr(dot + 1);
        if (!method_keys().at(method).count(param))
            throw ConfigError("unknown parameter '" + param + "' for method " + method);
        if (param == "pattern") parse_pattern(value);
        else if (param == "threshold") {
            if (to_real(key, value) < 0.0) throw ConfigError(key + " must be nonnegative");
        } else if (to_uint(key, value) == 0 && param != "width" && param != "tc")
            throw ConfigError(key + " must be at least 1");
    }
    Params cdt(method_params, "cdt.");
    GibbsConfig{cdt.uint("t", 100), cdt.uint("tc", 10), 0}.validate();

    if (generator.empty() == dataset_path.empty())
        throw ConfigError("exactly one of 'dataset' and 'generator' must be set");
    if (!dataset_path.empty() && label_count == 0)
        throw ConfigError("'label_count' is required with 'dataset'");
    if (!generator.empty()) {
        check_generator(generator, generator_params, "");
        if (generator == "bn") {
            const auto p = bn_params(generator_params, "", seed);
            if (p.t == 0 || p.t > p.d) throw ConfigError("generator bn needs 1 <= t <= d");
            if (!(p.sigma2 > 0.0)) throw ConfigError("generator bn needs sigma2 > 0");
        }
    }
    if (folds < 2) throw ConfigError("folds must be at least 2");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (sgd.epochs < 1) throw ConfigError("sgd.epochs must be at least 1");
    if (!(sgd.learning_rate > 0.0)) throw ConfigError("sgd.lr must be positive");
    if (sgd.l2 < 0.0) throw ConfigError("sgd.l2 must be nonnegative");
}

std::string ExperimentConfig::display_name() const {
    if (!name.empty()) return name;
    if (!generator.empty()) return generator;
    return std::filesystem::path(dataset_path).stem().string();
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        config.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    if (!c.name.empty()) out << "name = " << c.name << '\n';
    if (!c.dataset_path.empty()) out << "dataset = " << c.dataset_path << '\n';
    if (c.label_count) out << "label_count = " << c.label_count << '\n';
    if (!c.generator.empty()) out << "generator = " << c.generator << '\n';
    for (const auto& [k, v] : c.generator_params) out << "gen." << k << " = " << v << '\n';
    out << "methods = ";
    for (std::size_t i = 0; i < c.methods.size(); ++i) out << (i ? "," : "") << c.methods[i];
    out << '\n';
    for (const auto& [k, v] : c.method_params) out << k << " = " << v << '\n';
    out << "folds = " << c.folds << '\n';
    out << "seed = " << c.seed << '\n';
    out << "workers = " << c.workers << '\n';
    if (!c.out.empty()) out << "out = " << c.out << '\n';
    out << "format = " << c.format << '\n';
    out << "sgd.epochs = " << c.sgd.epochs << '\n';
    out << "sgd.lr = " << real_text(c.sgd.learning_rate) << '\n';
    out << "sgd.l2 = " << real_text(c.sgd.l2) << '\n';
    return out.str();
}

Dataset materialize_dataset(const ExperimentConfig& config) {
    if (!config.dataset_path.empty()) return load_dataset(config.dataset_path, config.label_count);
    return generate_dataset(config.generator, config.generator_params, "", config.seed, nullptr,
                            nullptr);
}

MultiLabelModel train_method(const std::string& method, const ExperimentConfig& config,
                             const Dataset& train, std::uint64_t seed) {
    Params p(config.method_params, method + ".");
    SgdConfig base = config.sgd;
    base.seed = derive_seed(seed, 1);
    const std::uint64_t structure_seed = derive_seed(seed, 2);
    const std::size_t l = train.l();

    if (method == "ic") return train_ic(train, base);
    if (method == "cc") return train_cc(train, random_order(l, structure_seed), base);
    if (method == "ecc") return train_ensemble_cc(train, p.uint("m", 10), base, structure_seed);
    if (method == "mcc") return select_mcc(train, p.uint("m", 10), base, structure_seed);
    if (method == "ebcc")
        return train_ebcc(train, p.uint("m", std::min<std::size_t>(10, l)), base, structure_seed);
    if (method == "ct")
        return train_ct(train, p.uint("width", 0), parse_pattern(p.text("pattern", "left+above")),
                        base, structure_seed);
    if (method == "ect")
        return train_ect(train, p.uint("m", 10), p.uint("width", 0),
                         parse_pattern(p.text("pattern", "left+above")), base, structure_seed);
    if (method == "cdt")
        return train_cdt(train, p.uint("width", 0), base, structure_seed,
                         GibbsConfig{p.uint("t", 100), p.uint("tc", 10), derive_seed(seed, 3)});
    if (method == "fs" || method == "lead")
        return train_bcc(
            train, DirectedStructure::from_parents(method_structure(method, config, train, seed)),
            base);
    throw ConfigError("unknown method '" + method + "'");
}

ParentSets method_structure(const std::string& method, const ExperimentConfig& config,
                            const Dataset& dataset, std::uint64_t seed) {
    Params p(config.method_params, method + ".");
    SgdConfig base = config.sgd;
    base.seed = derive_seed(seed, 1);
    const std::uint64_t structure_seed = derive_seed(seed, 2);
    const std::size_t l = dataset.l();

    if (method == "ic") return ParentSets(l);
    if (method == "cc" || method == "ecc" || method == "mcc") {
        const auto order = method == "cc" ? random_order(l, structure_seed)
                                          : random_order(l, member_order_seed(structure_seed, 0));
        ParentSets parents(l);
        for (std::size_t j = 0; j < l; ++j) {
            parents[order[j]].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(j));
            std::sort(parents[order[j]].begin(), parents[order[j]].end());
        }
        return parents;
    }
    if (method == "ebcc")
        return spanning_tree_structure(mutual_information_matrix(dataset.labels),
                                       member_order_seed(structure_seed, 0))
            .parents;
    if (method == "fs")
        return fs_structure(dataset.labels, p.uint("max_parents", 2), p.real("threshold", 0.0),
                            structure_seed)
            .parents;
    if (method == "lead")
        return lead_structure(dataset, base, p.uint("max_parents", 2), p.real("threshold", 0.0),
                              structure_seed)
            .parents;
    const std::size_t width = p.uint("width", 0) ? p.uint("width", 0) : default_trellis_width(l);
    const auto mi = mutual_information_matrix(dataset.labels);
    if (method == "ct")
        return build_trellis(mi, width, parse_pattern(p.text("pattern", "left+above")),
                             structure_seed)
            .parents;
    if (method == "ect")
        return build_trellis(mi, width, parse_pattern(p.text("pattern", "left+above")),
                             member_order_seed(structure_seed, 0))
            .parents;
    if (method == "cdt")
        return build_trellis(mi, width, ParentPattern::LeftAbove, structure_seed).neighbors();
    throw ConfigError("unknown method '" + method + "'");
}

std::vector<MethodResult> run_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_experiment(config, materialize_dataset(config));
}

std::vector<MethodResult> run_experiment(const ExperimentConfig& config, const Dataset& dataset) {
    config.validate();
    dataset.validate();
    const FoldPlan plan = kfold_split(dataset.n(), config.folds, derive_seed(config.seed, 0xf01d));
    const std::size_t n_methods = config.methods.size();
    const std::size_t n_tasks = n_methods * plan.k;
    std::vector<EvaluationReport> fold_reports(n_tasks);

    run_tasks(n_tasks, config.workers, [&](std::size_t task) {
        const std::size_t m = task / plan.k;
        const std::size_t fold = task % plan.k;
        const std::string& method = config.methods[m];
        const auto train_idx = plan.train_indices(fold);
        const auto test_idx = plan.test_indices(fold);
        const Dataset train = dataset.select_rows(train_idx);
        const Dataset test = dataset.select_rows(test_idx);
        const std::uint64_t seed = derive_seed(derive_seed(config.seed, name_stream(method)), fold);

        auto start = std::chrono::steady_clock::now();
        const MultiLabelModel model = train_method(method, config, train, seed);
        const double train_s = seconds_since(start);
        start = std::chrono::steady_clock::now();
        const BitMatrix pred = model.predict_all(test.features);
        const double test_s = seconds_since(start);

        EvaluationReport r = evaluate(test.labels, pred);
        r.dataset = config.display_name();
        r.method = method;
        r.train_seconds = train_s;
        r.test_seconds = test_s;
        fold_reports[task] = std::move(r);
    });

    std::vector<MethodResult> results;
    for (std::size_t m = 0; m < n_methods; ++m) {
        MethodResult res;
        res.folds.assign(fold_reports.begin() + static_cast<std::ptrdiff_t>(m * plan.k),
                         fold_reports.begin() + static_cast<std::ptrdiff_t>((m + 1) * plan.k));
        auto stat = [&](auto field, double& mean, double& sd) {
            double sum = 0.0, sq = 0.0;
            for (const auto& f : res.folds) sum += f.*field;
            mean = sum / static_cast<double>(plan.k);
            for (const auto& f : res.folds) sq += (f.*field - mean) * (f.*field - mean);
            sd = std::sqrt(sq / static_cast<double>(plan.k > 1 ? plan.k - 1 : 1));
        };
        res.mean.dataset = res.stddev.dataset = config.display_name();
        res.mean.method = res.stddev.method = config.methods[m];
        res.mean.n = res.stddev.n = dataset.n();
        res.mean.l = res.stddev.l = dataset.l();
        stat(&EvaluationReport::hamming, res.mean.hamming, res.stddev.hamming);
        stat(&EvaluationReport::exact_match, res.mean.exact_match, res.stddev.exact_match);
        stat(&EvaluationReport::jaccard_accuracy, res.mean.jaccard_accuracy,
             res.stddev.jaccard_accuracy);
        stat(&EvaluationReport::train_seconds, res.mean.train_seconds, res.stddev.train_seconds);
        stat(&EvaluationReport::test_seconds, res.mean.test_seconds, res.stddev.test_seconds);
        results.push_back(std::move(res));
    }
    return results;
}

std::string format_results_csv(const std::vector<MethodResult>& results) {
    std::string out = std::string(kReportCsvHeader) + "\n";
    for (const auto& r : results) out += report_csv_row(r.mean) + "\n";
    return out;
}

std::string format_results_json(const std::vector<MethodResult>& results) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json rec = r.mean;
        rec["std"] = {{"hamming", r.stddev.hamming},
                      {"exact", r.stddev.exact_match},
                      {"jaccard", r.stddev.jaccard_accuracy},
                      {"train_s", r.stddev.train_seconds},
                      {"test_s", r.stddev.test_seconds}};
        nlohmann::json folds = nlohmann::json::array();
        for (const auto& f : r.folds) folds.push_back(f);
        rec["folds"] = std::move(folds);
        records.push_back(std::move(rec));
    }
    return records.dump(2) + "\n";
}

std::string format_results_table(const std::vector<MethodResult>& results) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-17s %-17s %-17s %9s %9s\n", "method", "hamming",
                  "exact", "jaccard", "train_s", "test_s");
    out << line;
    for (const auto& r : results) {
        auto cell = [](double m, double s) { return fixed(m, 3) + " +- " + fixed(s, 3); };
        std::snprintf(line, sizeof line, "%-8s %-17s %-17s %-17s %9.3f %9.3f\n",
                      r.mean.method.c_str(), cell(r.mean.hamming, r.stddev.hamming).c_str(),
                      cell(r.mean.exact_match, r.stddev.exact_match).c_str(),
                      cell(r.mean.jaccard_accuracy, r.stddev.jaccard_accuracy).c_str(),
                      r.mean.train_seconds, r.mean.test_seconds);
        out << line;
    }
    return out.str();
}

RankTable rank_report(const std::vector<EvaluationReport>& reports, double q_p) {
    if (reports.empty()) throw ConfigError("no report rows to rank");
    if (!(q_p > 0.0)) throw ConfigError("q_p must be positive");
    RankTable table;
    auto index_of = [](std::vector<std::string>& names, const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
        names.push_back(name);
        return names.size() - 1;
    };
    for (const auto& r : reports) {
        index_of(table.methods, r.method);
        index_of(table.datasets, r.dataset);
    }
    table.metrics = {"hamming", "exact", "jaccard", "train_s", "test_s"};
    const std::size_t nm = table.methods.size(), nd = table.datasets.size();
    std::vector<RealMatrix> scores(table.metrics.size(), RealMatrix(nm, nd, 0.0));
    Matrix<std::uint8_t> filled(nm, nd, 0);
    for (const auto& r : reports) {
        const std::size_t m = index_of(table.methods, r.method);
        const std::size_t d = index_of(table.datasets, r.dataset);
        if (filled(m, d)) throw ConfigError("duplicate report row for " + r.method + " on " + r.dataset);
        filled(m, d) = 1;
        scores[0](m, d) = r.hamming;
        scores[1](m, d) = r.exact_match;
        scores[2](m, d) = r.jaccard_accuracy;
        scores[3](m, d) = r.train_seconds;
        scores[4](m, d) = r.test_seconds;
    }
    for (std::size_t m = 0; m < nm; ++m)
        for (std::size_t d = 0; d < nd; ++d)
            if (!filled(m, d))
                throw ConfigError("missing report row for " + table.methods[m] + " on " +
                                  table.datasets[d]);
    for (std::size_t k = 0; k < table.metrics.size(); ++k)
        table.ranks.push_back(average_ranks(scores[k], k < 3));
    table.critical_distance = nm >= 2 ? nemenyi_cd(nm, nd, q_p) : 0.0;
    return table;
}

RankTable rank_report_files(const std::vector<std::filesystem::path>& files, double q_p) {
    std::vector<EvaluationReport> reports;
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open " + path.string());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        auto rows = parse_report_csv(buffer.str());
        reports.insert(reports.end(), rows.begin(), rows.end());
    }
    return rank_report(reports, q_p);
}

std::string format_rank_table(const RankTable& table) {
    std::string out = "metric,method,avg_rank,cd\n";
    for (std::size_t k = 0; k < table.metrics.size(); ++k)
        for (std::size_t m = 0; m < table.methods.size(); ++m)
            out += table.metrics[k] + "," + table.methods[m] + "," + fixed(table.ranks[k][m], 4) +
                   "," + fixed(table.critical_distance, 4) + "\n";
    return out;
}

void generate_command(const std::string& generator,
                      const std::map<std::string, std::string>& params,
                      const std::filesystem::path& out) {
    GroundTruthGraph truth;
    localization::Scenario scenario;
    const Dataset data = generate_dataset(generator, params, "", 0, &truth, &scenario);
    save_dataset(data, out);
    const std::filesystem::path side =
        out.string() + (generator == "bn" ? ".truth.txt" : ".scenario.json");
    std::ofstream f(side, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + side.string() + " for writing");
    if (generator == "bn") f << format_adjacency(truth_structure(truth).parents);
    else f << nlohmann::json(scenario).dump(2) << '\n';
    if (!f) throw IoError("write failed: " + side.string());
}

}  // namespace mlc::harness
