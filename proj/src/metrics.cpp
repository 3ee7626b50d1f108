#include "mlc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "mlc/errors.hpp"

namespace mlc {

namespace {

void check_same_shape(const BitMatrix& truth, const BitMatrix& pred) {
    if (truth.rows() != pred.rows() || truth.cols() != pred.cols())
        throw InputError("truth and prediction shapes differ");
    if (truth.rows() == 0 || truth.cols() == 0) throw InputError("empty label matrix");
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

double hamming_score(const BitMatrix& truth, const BitMatrix& pred) {
    check_same_shape(truth, pred);
    std::size_t agree = 0;
    const auto t = truth.data();
    const auto p = pred.data();
    for (std::size_t i = 0; i < t.size(); ++i) agree += t[i] == p[i];
    return static_cast<double>(agree) / static_cast<double>(t.size());
}

double exact_match(const BitMatrix& truth, const BitMatrix& pred) {
    check_same_shape(truth, pred);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < truth.rows(); ++r) {
        auto a = truth.row(r);
        hits += std::equal(a.begin(), a.end(), pred.row(r).begin());
    }
    return static_cast<double>(hits) / static_cast<double>(truth.rows());
}

double jaccard_accuracy(const BitMatrix& truth, const BitMatrix& pred) {
    check_same_shape(truth, pred);
    double total = 0.0;
    for (std::size_t r = 0; r < truth.rows(); ++r) {
        auto a = truth.row(r);
        auto b = pred.row(r);
        std::size_t both = 0, either = 0;
        for (std::size_t c = 0; c < a.size(); ++c) {
            both += a[c] & b[c];
            either += a[c] | b[c];
        }
        total += either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
    }
    return total / static_cast<double>(truth.rows());
}

EvaluationReport evaluate(const BitMatrix& truth, const BitMatrix& pred) {
    EvaluationReport r;
    r.hamming = hamming_score(truth, pred);
    r.exact_match = exact_match(truth, pred);
    r.jaccard_accuracy = jaccard_accuracy(truth, pred);
    r.n = truth.rows();
    r.l = truth.cols();
    return r;
}

std::vector<double> average_ranks(const RealMatrix& scores, bool higher_is_better) {
    const std::size_t methods = scores.rows();
    const std::size_t datasets = scores.cols();
    if (methods == 0 || datasets == 0) throw InputError("empty score matrix");
    std::vector<double> sums(methods, 0.0);
    std::vector<std::size_t> idx(methods);
    for (std::size_t d = 0; d < datasets; ++d) {
        std::iota(idx.begin(), idx.end(), 0);
        auto better = [&](std::size_t a, std::size_t b) {
            return higher_is_better ? scores(a, d) > scores(b, d) : scores(a, d) < scores(b, d);
        };
        std::stable_sort(idx.begin(), idx.end(), better);
        for (std::size_t i = 0; i < methods;) {
            std::size_t j = i + 1;
            while (j < methods && scores(idx[j], d) == scores(idx[i], d)) ++j;
            // positions i..j-1 hold ranks i+1..j
            const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
            for (std::size_t k = i; k < j; ++k) sums[idx[k]] += rank;
            i = j;
        }
    }
    for (auto& s : sums) s /= static_cast<double>(datasets);
    return sums;
}

double nemenyi_cd(std::size_t n_algorithms, std::size_t n_datasets, double q_p) {
    if (n_algorithms < 2) throw ConfigError("Nemenyi test needs at least two algorithms");
    if (n_datasets < 1) throw ConfigError("Nemenyi test needs at least one dataset");
    if (!(q_p > 0.0)) throw ConfigError("q_p must be positive");
    const double na = static_cast<double>(n_algorithms);
    return q_p * std::sqrt(na * (na + 1.0) / (6.0 * static_cast<double>(n_datasets)));
}

std::string report_csv_row(const EvaluationReport& r) {
    return r.dataset + "," + r.method + "," + fixed(r.hamming, 6) + "," + fixed(r.exact_match, 6) +
           "," + fixed(r.jaccard_accuracy, 6) + "," + fixed(r.train_seconds, 3) + "," +
           fixed(r.test_seconds, 3);
}

std::vector<EvaluationReport> parse_report_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<EvaluationReport> out;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line == kReportCsvHeader) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) throw ParseError(line_no, "report rows need 7 cells");
        EvaluationReport r;
        r.dataset = cells[0];
        r.method = cells[1];
        try {
            r.hamming = std::stod(cells[2]);
            r.exact_match = std::stod(cells[3]);
            r.jaccard_accuracy = std::stod(cells[4]);
            r.train_seconds = std::stod(cells[5]);
            r.test_seconds = std::stod(cells[6]);
        } catch (const std::exception&) {
            throw ParseError(line_no, "non-numeric report cell");
        }
        out.push_back(std::move(r));
    }
    return out;
}

void to_json(nlohmann::json& j, const EvaluationReport& r) {
    j = nlohmann::json{{"dataset", r.dataset},
                       {"method", r.method},
                       {"hamming", r.hamming},
                       {"exact", r.exact_match},
                       {"jaccard", r.jaccard_accuracy},
                       {"train_s", r.train_seconds},
                       {"test_s", r.test_seconds},
                       {"n", r.n},
                       {"l", r.l}};
}

}  // namespace mlc
