#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlc/matrix.hpp"

namespace mlc {

/// N instances of D real features paired with L binary labels.
struct Dataset {
    RealMatrix features;   // N x D
    BitMatrix labels;      // N x L, entries 0/1
    std::vector<std::string> feature_names;
    std::vector<std::string> label_names;

    std::size_t n() const noexcept { return labels.rows(); }
    std::size_t d() const noexcept { return features.cols(); }
    std::size_t l() const noexcept { return labels.cols(); }

    /// Throws InputError if any invariant is broken.
    void validate() const;

    Dataset select_rows(std::span<const std::size_t> indices) const;

    /// Builds a dataset with default names `x1..xD`, `y1..yL`.
    static Dataset from_matrices(RealMatrix features, BitMatrix labels);

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// One-parent DAG over labels plus the generating weights of the
/// synthetic Bayesian-network model.
struct GroundTruthGraph {
    std::vector<std::optional<std::size_t>> parent;
    std::vector<std::vector<std::uint8_t>> weights;  // L binary D-vectors
    double alpha = 0.0;
    double sigma2 = 1.0;
    double delta = 0.0;
    std::size_t t = 1;

    std::size_t l() const noexcept { return parent.size(); }
};

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Reads the CSV dialect: header line, label columns first (`0`/`1`),
/// then decimal feature columns.
Dataset load_dataset(const std::filesystem::path& path, std::size_t label_count);
Dataset parse_dataset(std::string_view text, std::size_t label_count);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string format_dataset(const Dataset& dataset);

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

struct BnParams {
    std::size_t n = 1000;
    std::size_t d = 20;
    std::size_t l = 6;
    std::size_t t = 5;
    double alpha = 1.0;
    double sigma2 = 1.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
};

/// Samples the synthetic labelled data of the one-parent Bayesian-network
/// model: x ~ N(0, I), y_l = [T^-1/2 w_l.x + eps_l >= delta] with
/// eps_l ~ N(alpha * y_pa(l), sigma2) and y in {-1, +1} inside the model.
/// Parentless labels use a zero mean.
std::pair<Dataset, GroundTruthGraph> generate_bn_dataset(const BnParams& params);

double label_cardinality(const Dataset& dataset);

}  // namespace mlc
