#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "mlc/data.hpp"
#include "mlc/inference.hpp"
#include "mlc/linear.hpp"
#include "mlc/structure.hpp"

namespace mlc {

/// Classifier chain. classifiers[j] predicts label order[j] from the
/// features followed by labels order[0..j-1].
struct ChainModel {
    std::vector<std::size_t> order;
    std::vector<LinearModel> classifiers;
    std::size_t d = 0;

    std::size_t l() const noexcept { return order.size(); }
};

/// Directed model: classifiers[l] sees the features followed by the labels
/// in structure.parents[l] (ascending index order).
struct StructuredModel {
    DirectedStructure structure;
    std::vector<LinearModel> classifiers;
    std::size_t d = 0;

    std::size_t l() const noexcept { return classifiers.size(); }
};

/// Dependency network over a symmetric neighbour relation.
struct DependencyModel {
    ParentSets neighbors;
    std::vector<LinearModel> classifiers;
    std::size_t d = 0;
    GibbsConfig gibbs;

    std::size_t l() const noexcept { return classifiers.size(); }
};

class MultiLabelModel;

struct EnsembleModel {
    std::vector<MultiLabelModel> members;
    double vote_threshold = 0.5;
};

/// Any trained predictor: x (length D) -> binary label vector.
class MultiLabelModel {
public:
    using Variant = std::variant<ChainModel, StructuredModel, DependencyModel, EnsembleModel>;

    MultiLabelModel(ChainModel m) : model_(std::move(m)) {}
    MultiLabelModel(StructuredModel m) : model_(std::move(m)) {}
    MultiLabelModel(DependencyModel m) : model_(std::move(m)) {}
    MultiLabelModel(EnsembleModel m) : model_(std::move(m)) {}

    LabelVector predict(std::span<const double> x) const;
    BitMatrix predict_all(const RealMatrix& features) const;
    std::size_t l() const;

    const Variant& variant() const noexcept { return model_; }
    template <class T>
    const T& as() const { return std::get<T>(model_); }

private:
    Variant model_;
};

/// Uniformly random permutation of [0, l).
std::vector<std::size_t> random_order(std::size_t l, std::uint64_t seed);

/// Seed handed to the classifier of `label` in every single-structure model.
std::uint64_t classifier_seed(const SgdConfig& base, std::size_t label);

StructuredModel train_ic(const Dataset& dataset, const SgdConfig& base);

ChainModel train_cc(const Dataset& dataset, std::span<const std::size_t> order,
                    const SgdConfig& base);
LabelVector predict_cc(const ChainModel& model, std::span<const double> x);

/// Ensemble of m chains; member i uses order random_order(L, member_order_seed(seed, i))
/// and base seed member_base_seed(seed, i).
EnsembleModel train_ensemble_cc(const Dataset& dataset, std::size_t m, const SgdConfig& base,
                                std::uint64_t seed);
std::uint64_t member_order_seed(std::uint64_t seed, std::size_t member);
std::uint64_t member_base_seed(std::uint64_t seed, std::size_t member);

/// Label l is 1 iff (votes for 1) / M > vote_threshold.
LabelVector predict_vote(const EnsembleModel& ensemble, std::span<const double> x);

/// Best of m random chains by training-set exact match (ties: lowest index).
ChainModel select_mcc(const Dataset& dataset, std::size_t m, const SgdConfig& base,
                      std::uint64_t seed);

StructuredModel train_bcc(const Dataset& dataset, const DirectedStructure& structure,
                          const SgdConfig& base);
LabelVector predict_structured(const StructuredModel& model, std::span<const double> x);

/// Ensemble of m BCCs over MI spanning trees with seeded random roots.
EnsembleModel train_ebcc(const Dataset& dataset, std::size_t m, const SgdConfig& base,
                         std::uint64_t seed);

/// width 0 selects default_trellis_width(L).
StructuredModel train_ct(const Dataset& dataset, std::size_t width, ParentPattern pattern,
                         const SgdConfig& base, std::uint64_t seed);

/// Member i is train_ct(..., base seed member_base_seed(seed, i), trellis seed
/// member_order_seed(seed, i)).
EnsembleModel train_ect(const Dataset& dataset, std::size_t m, std::size_t width,
                        ParentPattern pattern, const SgdConfig& base, std::uint64_t seed);

/// Undirected trellis (left+above pattern, symmetrized); `gibbs` is stored
/// as the model's default inference schedule.
DependencyModel train_cdt(const Dataset& dataset, std::size_t width, const SgdConfig& base,
                          std::uint64_t seed, const GibbsConfig& gibbs = {});

/// Throws ConfigError unless t_burn < t_total.
LabelVector predict_cdt(const DependencyModel& model, std::span<const double> x,
                        std::size_t t_total, std::size_t t_burn, std::uint64_t seed);

/// Writes/reads a model directory: meta.json, structure.txt (adjacency
/// format) and one label_<i>.json LinearModel record per classifier.
/// Ensemble members go to member_<i>/ subdirectories.
void save_model_bundle(const MultiLabelModel& model, const std::filesystem::path& dir);
MultiLabelModel load_model_bundle(const std::filesystem::path& dir);

}  // namespace mlc
