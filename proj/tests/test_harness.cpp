#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlc/data.hpp"
#include "mlc/errors.hpp"
#include "mlc/harness.hpp"
#include "mlc/metrics.hpp"
#include "mlc/structure.hpp"

using namespace mlc;
using namespace mlc::harness;

namespace {

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "mlc_test_harness";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Drops the two timing columns from every line of a results CSV.
std::string score_columns(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        for (int i = 0; i < 2; ++i) line = line.substr(0, line.rfind(','));
        out += line + "\n";
    }
    return out;
}

ExperimentConfig bn_config(std::vector<std::string> methods) {
    ExperimentConfig c;
    c.name = "bn-small";
    c.generator = "bn";
    c.generator_params = {{"n", "120"}, {"l", "4"}, {"d", "8"}, {"t", "3"}, {"seed", "4"}};
    c.methods = std::move(methods);
    c.folds = 3;
    c.seed = 9;
    c.sgd.epochs = 10;
    return c;
}

}  // namespace

TEST_CASE("config text round trip") {
    const ExperimentConfig c = parse_config(
        "# comment line\n"
        "name = easy\n"
        "generator = bn\n"
        "gen.l = 6\n"
        "gen.d = 20\n"
        "gen.t = 5\n"
        "methods = ic, ct,ecc\n"
        "ct.width = 2\n"
        "ecc.m = 4\n"
        "folds = 4\n"
        "seed = 12\n"
        "workers = 2\n"
        "sgd.epochs = 50\n"
        "format = json\n");
    CHECK(c.name == "easy");
    CHECK(c.methods == std::vector<std::string>{"ic", "ct", "ecc"});
    CHECK(c.method_params.at("ct.width") == "2");
    CHECK(c.generator_params.at("l") == "6");
    CHECK(c.folds == 4);
    CHECK(c.seed == 12);
    CHECK(c.sgd.epochs == 50);
    CHECK_NOTHROW(c.validate());
    CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("colour = blue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("folds = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("generator = bn\ngen.l = 3\ngen.d = 4\ngen.t = 2\nmethods = svm\n")
                        .validate(),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("generator = bn\ngen.d = 4\ngen.t = 2\nmethods = ic\n").validate(),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("generator = bn\ngen.l = 3\ngen.d = 4\ngen.t = 2\n"
                                 "methods = ic\nct.width = 2\nic.m = 3\n")
                        .validate(),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("dataset = a.csv\nmethods = ic\n").validate(), ConfigError);
}

TEST_CASE("folds larger than the dataset are a configuration error") {
    const Dataset d = parse_dataset("y1,x1\n1,0.1\n0,0.2\n1,0.3\n0,0.4\n", 1);
    ExperimentConfig c = bn_config({"ic"});
    c.folds = 5;
    CHECK_THROWS_AS(run_experiment(c, d), ConfigError);
}

TEST_CASE("a single method on a 10-instance dataset yields one report row") {
    const auto path = temp_dir() / "ten.csv";
    {
        std::ofstream out(path);
        out << "y1,y2,x1,x2\n";
        for (int i = 0; i < 10; ++i) out << i % 2 << ',' << (i / 2) % 2 << ',' << i * 0.1 << ','
                                         << (i % 3) * 0.5 << '\n';
    }
    ExperimentConfig c;
    c.dataset_path = path.string();
    c.label_count = 2;
    c.methods = {"ic"};
    c.validate();
    const auto results = run_experiment(c);
    REQUIRE(results.size() == 1);
    CHECK(results[0].folds.size() == 5);
    const std::string csv = format_results_csv(results);
    const auto rows = parse_report_csv(csv);
    CHECK(rows.size() == 1);
    CHECK(rows[0].method == "ic");
}

TEST_CASE("results depend only on the config") {
    ExperimentConfig c = bn_config({"ic", "cc", "ct", "cdt", "lead"});
    c.method_params["cdt.t"] = "30";
    c.method_params["cdt.tc"] = "5";
    c.validate();
    const std::string first = score_columns(format_results_csv(run_experiment(c)));
    CHECK(first == score_columns(format_results_csv(run_experiment(c))));
    c.workers = 3;
    CHECK(first == score_columns(format_results_csv(run_experiment(c))));
    c.seed = 10;
    CHECK(first != score_columns(format_results_csv(run_experiment(c))));
}

TEST_CASE("every method trains and exposes a structure") {
    ExperimentConfig c = bn_config({"ic"});
    c.method_params = {{"ecc.m", "2"}, {"mcc.m", "2"}, {"ebcc.m", "2"}, {"ect.m", "2"},
                       {"cdt.t", "20"}, {"cdt.tc", "2"}};
    const Dataset d = materialize_dataset(c);
    for (const auto& method : known_methods()) {
        CAPTURE(method);
        const MultiLabelModel model = train_method(method, c, d, 3);
        CHECK(model.predict_all(d.features).rows() == d.n());
        const ParentSets s = method_structure(method, c, d, 3);
        CHECK(s.size() == d.l());
        if (method == "cdt") {
            for (std::size_t l = 0; l < s.size(); ++l)
                for (auto k : s[l]) CHECK(std::count(s[k].begin(), s[k].end(), l) == 1);
        } else {
            CHECK_NOTHROW(DirectedStructure::from_parents(s));
        }
        if (method == "ic") {
            for (const auto& p : s) CHECK(p.empty());
        }
    }
}

TEST_CASE("rank reports") {
    auto report = [](std::string dataset, std::string method, double score) {
        EvaluationReport r;
        r.dataset = std::move(dataset);
        r.method = std::move(method);
        r.hamming = r.exact_match = r.jaccard_accuracy = score;
        r.train_seconds = r.test_seconds = 1.0 - score;
        return r;
    };
    SUBCASE("single method") {
        const RankTable t = rank_report({report("a", "ic", 0.5), report("b", "ic", 0.7)}, 2.0);
        for (const auto& row : t.ranks) CHECK(row == std::vector<double>{1.0});
        CHECK(t.critical_distance == 0.0);
    }
    SUBCASE("one dominant method") {
        const RankTable t = rank_report({report("a", "ct", 0.9), report("a", "ic", 0.5),
                                         report("b", "ct", 0.8), report("b", "ic", 0.6)},
                                        1.645);
        REQUIRE(t.methods.size() == 2);
        const std::size_t ct = t.methods[0] == "ct" ? 0 : 1;
        for (const auto& row : t.ranks) {
            CHECK(row[ct] == 1.0);
            CHECK(row[1 - ct] == 2.0);
        }
        CHECK(t.critical_distance == doctest::Approx(nemenyi_cd(2, 2, 1.645)));
        const std::string text = format_rank_table(t);
        CHECK(text.rfind("metric,method,avg_rank,cd", 0) == 0);
    }
}

TEST_CASE("generate command writes datasets and side files") {
    const auto dir = temp_dir();
    generate_command("bn", {{"n", "50"}, {"l", "6"}, {"d", "20"}, {"t", "5"}, {"alpha", "1"},
                            {"sigma2", "1"}},
                     dir / "bn.csv");
    const Dataset d = load_dataset(dir / "bn.csv", 6);
    CHECK(d.n() == 50);
    CHECK(d.d() == 20);
    const ParentSets truth = parse_adjacency(read_file(dir / "bn.csv.truth.txt"));
    CHECK(truth.size() == 6);
    CHECK_NOTHROW(DirectedStructure::from_parents(truth));

    generate_command("local", {{"w", "20"}, {"sensors", "30"}, {"n", "5"}}, dir / "local.csv");
    const Dataset loc = load_dataset(dir / "local.csv", 400);
    CHECK(loc.d() == 30);
    CHECK(std::filesystem::exists(dir / "local.csv.scenario.json"));

    CHECK_THROWS_AS(generate_command("bn", {{"l", "6"}}, dir / "x.csv"), ConfigError);
    CHECK_THROWS_AS(generate_command("grid", {}, dir / "x.csv"), ConfigError);
}
