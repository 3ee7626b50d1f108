#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlc/matrix.hpp"

namespace mlc {

struct EvaluationReport {
    std::string dataset;
    std::string method;
    double hamming = 0.0;
    double exact_match = 0.0;
    double jaccard_accuracy = 0.0;
    double train_seconds = 0.0;
    double test_seconds = 0.0;
    std::size_t n = 0;
    std::size_t l = 0;
};

/// Fraction of label bits predicted correctly.
double hamming_score(const BitMatrix& truth, const BitMatrix& pred);
/// Fraction of rows predicted exactly.
double exact_match(const BitMatrix& truth, const BitMatrix& pred);
/// Mean per-row |y AND yhat| / |y OR yhat|; a row with both sides empty scores 1.
double jaccard_accuracy(const BitMatrix& truth, const BitMatrix& pred);

EvaluationReport evaluate(const BitMatrix& truth, const BitMatrix& pred);

/// scores is methods x datasets. Within each dataset the best method gets
/// rank 1; tied methods share the mean of their ranks. Returns the mean
/// rank of each method.
std::vector<double> average_ranks(const RealMatrix& scores, bool higher_is_better);

/// q_p * sqrt(N_A (N_A + 1) / (6 N_D)).
double nemenyi_cd(std::size_t n_algorithms, std::size_t n_datasets, double q_p);

inline constexpr const char* kReportCsvHeader = "dataset,method,hamming,exact,jaccard,train_s,test_s";

std::string report_csv_row(const EvaluationReport& report);
std::vector<EvaluationReport> parse_report_csv(const std::string& text);
void to_json(nlohmann::json& j, const EvaluationReport& report);

}  // namespace mlc
