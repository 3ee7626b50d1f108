#include "mlc/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mlc/errors.hpp"
#include "mlc/rng.hpp"

namespace mlc {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::optional<double> parse_real(std::string_view cell) {
    double value = 0.0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (ec != std::errc{} || ptr != end || cell.empty()) return std::nullopt;
    return value;
}

std::vector<std::string> default_names(char prefix, std::size_t count) {
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i + 1));
    return names;
}

}  // namespace

void Dataset::validate() const {
    if (labels.rows() == 0) throw InputError("dataset has no instances");
    if (features.rows() != labels.rows())
        throw InputError("feature and label row counts differ");
    if (features.cols() == 0) throw InputError("dataset has no features");
    if (labels.cols() == 0) throw InputError("dataset has no labels");
    if (feature_names.size() != features.cols())
        throw InputError("feature name count does not match D");
    if (label_names.size() != labels.cols())
        throw InputError("label name count does not match L");
    for (auto bit : labels.data())
        if (bit > 1) throw InputError("label entry is not 0/1");
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
    return Dataset{features.select_rows(indices), labels.select_rows(indices), feature_names,
                   label_names};
}

Dataset Dataset::from_matrices(RealMatrix features, BitMatrix labels) {
    Dataset out;
    out.feature_names = default_names('x', features.cols());
    out.label_names = default_names('y', labels.cols());
    out.features = std::move(features);
    out.labels = std::move(labels);
    return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) out.push_back(i);
    return out;
}

Dataset parse_dataset(std::string_view text, std::size_t label_count) {
    if (label_count == 0) throw ConfigError("label_count must be at least 1");

    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size()) return false;
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = nl + 1;
        ++line_no;
        return true;
    };

    std::string_view line;
    if (!next_line(line) || line.empty()) throw ParseError(1, "missing header");
    const auto header = split_commas(line);
    if (label_count >= header.size())
        throw ConfigError("label_count " + std::to_string(label_count) +
                          " leaves no feature columns (" + std::to_string(header.size()) +
                          " columns)");

    Dataset out;
    const std::size_t d = header.size() - label_count;
    for (std::size_t c = 0; c < header.size(); ++c)
        (c < label_count ? out.label_names : out.feature_names).emplace_back(header[c]);
    out.labels = BitMatrix(0, label_count);
    out.features = RealMatrix(0, d);

    std::vector<std::uint8_t> label_row(label_count);
    std::vector<double> feature_row(d);
    while (next_line(line)) {
        if (line.empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != header.size())
            throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                          " cells, found " + std::to_string(cells.size()));
        for (std::size_t c = 0; c < label_count; ++c) {
            if (cells[c] == "0") label_row[c] = 0;
            else if (cells[c] == "1") label_row[c] = 1;
            else
                throw ParseError(line_no, "label cell '" + std::string(cells[c]) +
                                              "' is not binary");
        }
        for (std::size_t c = 0; c < d; ++c) {
            auto value = parse_real(cells[label_count + c]);
            if (!value)
                throw ParseError(line_no, "feature cell '" +
                                              std::string(cells[label_count + c]) +
                                              "' is not numeric");
            feature_row[c] = *value;
        }
        out.labels.append_row(label_row);
        out.features.append_row(feature_row);
    }
    if (out.n() == 0) throw ParseError(line_no, "no instances");
    return out;
}

Dataset load_dataset(const std::filesystem::path& path, std::size_t label_count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset(buffer.str(), label_count);
}

std::string format_dataset(const Dataset& dataset) {
    dataset.validate();
    std::string out;
    for (std::size_t c = 0; c < dataset.l(); ++c) {
        if (c) out += ',';
        out += dataset.label_names[c];
    }
    for (const auto& name : dataset.feature_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    char buf[64];
    for (std::size_t r = 0; r < dataset.n(); ++r) {
        auto labels = dataset.labels.row(r);
        for (std::size_t c = 0; c < labels.size(); ++c) {
            if (c) out += ',';
            out += labels[c] ? '1' : '0';
        }
        for (double v : dataset.features.row(r)) {
            out += ',';
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out.append(buf, end);
        }
        out += '\n';
    }
    return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    const std::string text = format_dataset(dataset);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n)
        throw ConfigError("k-fold split needs 2 <= k <= n (k=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(std::span(order));
    FoldPlan plan{k, std::vector<std::size_t>(n)};
    for (std::size_t pos = 0; pos < n; ++pos) plan.assignments[order[pos]] = pos % k;
    return plan;
}

std::pair<Dataset, GroundTruthGraph> generate_bn_dataset(const BnParams& p) {
    if (p.l == 0) throw ConfigError("l must be at least 1");
    if (p.d == 0) throw ConfigError("d must be at least 1");
    if (p.t == 0 || p.t > p.d) throw ConfigError("t must satisfy 1 <= t <= d");
    if (!(p.sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
    if (p.n == 0) throw ConfigError("n must be at least 1");

    Rng rng(p.seed);
    GroundTruthGraph truth;
    truth.alpha = p.alpha;
    truth.sigma2 = p.sigma2;
    truth.delta = p.delta;
    truth.t = p.t;

    truth.parent.resize(p.l);
    for (std::size_t l = 1; l < p.l; ++l)
        if (rng.bernoulli(0.5)) truth.parent[l] = static_cast<std::size_t>(rng.index(l));

    std::vector<std::size_t> columns(p.d);
    for (std::size_t l = 0; l < p.l; ++l) {
        std::iota(columns.begin(), columns.end(), 0);
        rng.shuffle(std::span(columns));
        std::vector<std::uint8_t> w(p.d, 0);
        for (std::size_t i = 0; i < p.t; ++i) w[columns[i]] = 1;
        truth.weights.push_back(std::move(w));
    }

    RealMatrix x(p.n, p.d);
    BitMatrix y(p.n, p.l);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p.t));
    const double sigma = std::sqrt(p.sigma2);
    for (std::size_t n = 0; n < p.n; ++n) {
        auto row = x.row(n);
        for (auto& v : row) v = rng.normal();
        // Parents always have a smaller index, so index order is topological.
        for (std::size_t l = 0; l < p.l; ++l) {
            double activation = 0.0;
            for (std::size_t j = 0; j < p.d; ++j)
                if (truth.weights[l][j]) activation += row[j];
            double mean = 0.0;
            if (truth.parent[l]) mean = p.alpha * (y(n, *truth.parent[l]) ? 1.0 : -1.0);
            const double eps = mean + sigma * rng.normal();
            y(n, l) = (scale * activation + eps >= p.delta) ? 1 : 0;
        }
    }
    return {Dataset::from_matrices(std::move(x), std::move(y)), std::move(truth)};
}

double label_cardinality(const Dataset& dataset) {
    dataset.validate();
    std::size_t ones = 0;
    for (auto bit : dataset.labels.data()) ones += bit;
    return static_cast<double>(ones) / static_cast<double>(dataset.n());
}

}  // namespace mlc
