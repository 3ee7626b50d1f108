#include "mlc/models.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mlc/errors.hpp"
#include "mlc/rng.hpp"

namespace mlc {

namespace {

// Features followed by the given label columns as 0/1 inputs.
RealMatrix augmented_inputs(const Dataset& dataset, std::span<const std::size_t> extra) {
    const std::size_t d = dataset.d();
    RealMatrix out(dataset.n(), d + extra.size());
    for (std::size_t r = 0; r < dataset.n(); ++r) {
        auto src = dataset.features.row(r);
        auto dst = out.row(r);
        std::copy(src.begin(), src.end(), dst.begin());
        for (std::size_t i = 0; i < extra.size(); ++i)
            dst[d + i] = static_cast<double>(dataset.labels(r, extra[i]));
    }
    return out;
}

LinearModel train_label(const Dataset& dataset, std::size_t label,
                        std::span<const std::size_t> extra, const SgdConfig& cfg) {
    std::vector<std::uint8_t> targets(dataset.n());
    for (std::size_t r = 0; r < dataset.n(); ++r) targets[r] = dataset.labels(r, label);
    return train_binary(augmented_inputs(dataset, extra), targets, cfg);
}

SgdConfig with_seed(SgdConfig cfg, std::uint64_t seed) {
    cfg.seed = seed;
    return cfg;
}

void check_input(std::size_t expected, std::span<const double> x) {
    if (x.size() != expected)
        throw InputError("feature vector has " + std::to_string(x.size()) +
                         " entries, model expects " + std::to_string(expected));
}

double exact_match_on(const ChainModel& chain, const Dataset& dataset) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < dataset.n(); ++r) {
        const auto pred = predict_cc(chain, dataset.features.row(r));
        hits += std::equal(pred.begin(), pred.end(), dataset.labels.row(r).begin());
    }
    return static_cast<double>(hits) / static_cast<double>(dataset.n());
}

}  // namespace

LabelVector MultiLabelModel::predict(std::span<const double> x) const {
    return std::visit(
        [&](const auto& m) -> LabelVector {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ChainModel>) return predict_cc(m, x);
            else if constexpr (std::is_same_v<T, StructuredModel>) return predict_structured(m, x);
            else if constexpr (std::is_same_v<T, DependencyModel>)
                return predict_cdt(m, x, m.gibbs.t_total, m.gibbs.t_burn, m.gibbs.seed);
            else return predict_vote(m, x);
        },
        model_);
}

BitMatrix MultiLabelModel::predict_all(const RealMatrix& features) const {
    BitMatrix out(features.rows(), l());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto y = predict(features.row(r));
        std::copy(y.begin(), y.end(), out.row(r).begin());
    }
    return out;
}

std::size_t MultiLabelModel::l() const {
    return std::visit(
        [](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, EnsembleModel>)
                return m.members.empty() ? 0 : m.members.front().l();
            else return m.l();
        },
        model_);
}

std::vector<std::size_t> random_order(std::size_t l, std::uint64_t seed) {
    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(std::span(order));
    return order;
}

std::uint64_t classifier_seed(const SgdConfig& base, std::size_t label) {
    return derive_seed(base.seed, label);
}

std::uint64_t member_order_seed(std::uint64_t seed, std::size_t member) {
    return derive_seed(seed, 2 * member);
}

std::uint64_t member_base_seed(std::uint64_t seed, std::size_t member) {
    return derive_seed(seed, 2 * member + 1);
}

StructuredModel train_ic(const Dataset& dataset, const SgdConfig& base) {
    dataset.validate();
    return train_bcc(dataset, DirectedStructure::from_parents(ParentSets(dataset.l())), base);
}

ChainModel train_cc(const Dataset& dataset, std::span<const std::size_t> order,
                    const SgdConfig& base) {
    dataset.validate();
    const std::size_t l = dataset.l();
    std::vector<bool> seen(l, false);
    if (order.size() != l) throw InputError("chain order must list every label once");
    for (std::size_t label : order) {
        if (label >= l || seen[label]) throw InputError("chain order is not a permutation");
        seen[label] = true;
    }
    ChainModel model{{order.begin(), order.end()}, {}, dataset.d()};
    model.classifiers.reserve(l);
    for (std::size_t j = 0; j < l; ++j)
        model.classifiers.push_back(train_label(dataset, order[j], order.first(j),
                                                with_seed(base, classifier_seed(base, order[j]))));
    return model;
}

LabelVector predict_cc(const ChainModel& model, std::span<const double> x) {
    check_input(model.d, x);
    LabelVector y(model.l(), 0);
    std::vector<double> input(x.begin(), x.end());
    input.reserve(model.d + model.l());
    for (std::size_t j = 0; j < model.l(); ++j) {
        const std::uint8_t bit = predict_proba(model.classifiers[j], input) > 0.5;
        y[model.order[j]] = bit;
        input.push_back(bit);
    }
    return y;
}

EnsembleModel train_ensemble_cc(const Dataset& dataset, std::size_t m, const SgdConfig& base,
                                std::uint64_t seed) {
    if (m < 1) throw ConfigError("ensemble size must be at least 1");
    EnsembleModel ensemble;
    for (std::size_t i = 0; i < m; ++i) {
        const auto order = random_order(dataset.l(), member_order_seed(seed, i));
        ensemble.members.emplace_back(
            train_cc(dataset, order, with_seed(base, member_base_seed(seed, i))));
    }
    return ensemble;
}

LabelVector predict_vote(const EnsembleModel& ensemble, std::span<const double> x) {
    if (ensemble.members.empty()) throw InputError("ensemble has no members");
    const std::size_t l = ensemble.members.front().l();
    std::vector<std::size_t> votes(l, 0);
    for (const auto& member : ensemble.members) {
        const auto y = member.predict(x);
        for (std::size_t i = 0; i < l; ++i) votes[i] += y[i];
    }
    const double m = static_cast<double>(ensemble.members.size());
    LabelVector out(l);
    for (std::size_t i = 0; i < l; ++i)
        out[i] = static_cast<double>(votes[i]) / m > ensemble.vote_threshold;
    return out;
}

ChainModel select_mcc(const Dataset& dataset, std::size_t m, const SgdConfig& base,
                      std::uint64_t seed) {
    if (m < 1) throw ConfigError("number of candidate chains must be at least 1");
    std::optional<ChainModel> best;
    double best_score = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto order = random_order(dataset.l(), member_order_seed(seed, i));
        ChainModel chain = train_cc(dataset, order, with_seed(base, member_base_seed(seed, i)));
        const double score = exact_match_on(chain, dataset);
        if (score > best_score) {
            best_score = score;
            best = std::move(chain);
        }
    }
    return std::move(*best);
}

StructuredModel train_bcc(const Dataset& dataset, const DirectedStructure& structure,
                          const SgdConfig& base) {
    dataset.validate();
    if (structure.l() != dataset.l())
        throw InputError("structure label count does not match dataset");
    StructuredModel model{structure, {}, dataset.d()};
    for (auto& set : model.structure.parents) std::sort(set.begin(), set.end());
    model.classifiers.reserve(dataset.l());
    for (std::size_t label = 0; label < dataset.l(); ++label)
        model.classifiers.push_back(train_label(dataset, label, model.structure.parents[label],
                                                with_seed(base, classifier_seed(base, label))));
    return model;
}

LabelVector predict_structured(const StructuredModel& model, std::span<const double> x) {
    check_input(model.d, x);
    LabelVector y(model.l(), 0);
    std::vector<double> input(x.begin(), x.end());
    for (std::size_t label : model.structure.topo_order) {
        const auto& parents = model.structure.parents[label];
        input.resize(model.d);
        for (std::size_t p : parents) input.push_back(y[p]);
        y[label] = predict_proba(model.classifiers[label], input) > 0.5;
    }
    return y;
}

EnsembleModel train_ebcc(const Dataset& dataset, std::size_t m, const SgdConfig& base,
                         std::uint64_t seed) {
    if (m < 1) throw ConfigError("ensemble size must be at least 1");
    dataset.validate();
    const MiMatrix mi = mutual_information_matrix(dataset.labels);
    EnsembleModel ensemble;
    for (std::size_t i = 0; i < m; ++i) {
        const auto tree = spanning_tree_structure(mi, member_order_seed(seed, i));
        ensemble.members.emplace_back(
            train_bcc(dataset, tree, with_seed(base, member_base_seed(seed, i))));
    }
    return ensemble;
}

StructuredModel train_ct(const Dataset& dataset, std::size_t width, ParentPattern pattern,
                         const SgdConfig& base, std::uint64_t seed) {
    dataset.validate();
    if (width == 0) width = default_trellis_width(dataset.l());
    const auto trellis =
        build_trellis(mutual_information_matrix(dataset.labels), width, pattern, seed);
    return train_bcc(dataset, trellis.directed(), base);
}

EnsembleModel train_ect(const Dataset& dataset, std::size_t m, std::size_t width,
                        ParentPattern pattern, const SgdConfig& base, std::uint64_t seed) {
    if (m < 1) throw ConfigError("ensemble size must be at least 1");
    dataset.validate();
    if (width == 0) width = default_trellis_width(dataset.l());
    const MiMatrix mi = mutual_information_matrix(dataset.labels);
    EnsembleModel ensemble;
    for (std::size_t i = 0; i < m; ++i) {
        const auto trellis = build_trellis(mi, width, pattern, member_order_seed(seed, i));
        ensemble.members.emplace_back(
            train_bcc(dataset, trellis.directed(), with_seed(base, member_base_seed(seed, i))));
    }
    return ensemble;
}

DependencyModel train_cdt(const Dataset& dataset, std::size_t width, const SgdConfig& base,
                          std::uint64_t seed, const GibbsConfig& gibbs) {
    dataset.validate();
    gibbs.validate();
    if (width == 0) width = default_trellis_width(dataset.l());
    const auto trellis = build_trellis(mutual_information_matrix(dataset.labels), width,
                                       ParentPattern::LeftAbove, seed);
    DependencyModel model{trellis.neighbors(), {}, dataset.d(), gibbs};
    model.classifiers.reserve(dataset.l());
    for (std::size_t label = 0; label < dataset.l(); ++label)
        model.classifiers.push_back(train_label(dataset, label, model.neighbors[label],
                                                with_seed(base, classifier_seed(base, label))));
    return model;
}

LabelVector predict_cdt(const DependencyModel& model, std::span<const double> x,
                        std::size_t t_total, std::size_t t_burn, std::uint64_t seed) {
    return marginal_map(gibbs_sample(model, x, GibbsConfig{t_total, t_burn, seed}));
}

// ---------------------------------------------------------------------------
// Bundles

namespace {

using nlohmann::json;

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_classifiers(const std::vector<LinearModel>& classifiers,
                       const std::filesystem::path& dir) {
    for (std::size_t i = 0; i < classifiers.size(); ++i)
        write_text(dir / ("label_" + std::to_string(i) + ".json"),
                   json(classifiers[i]).dump() + "\n");
}

std::vector<LinearModel> read_classifiers(std::size_t count, const std::filesystem::path& dir) {
    std::vector<LinearModel> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(
            json::parse(read_text(dir / ("label_" + std::to_string(i) + ".json"))).get<LinearModel>());
    return out;
}

}  // namespace

void save_model_bundle(const MultiLabelModel& model, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    json meta;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ChainModel>) {
                meta = {{"kind", "chain"}, {"d", m.d}, {"l", m.l()}, {"order", m.order}};
                ParentSets parents(m.l());
                for (std::size_t j = 0; j < m.l(); ++j)
                    parents[m.order[j]].assign(m.order.begin(), m.order.begin() + j);
                write_text(dir / "structure.txt", format_adjacency(parents));
                write_classifiers(m.classifiers, dir);
            } else if constexpr (std::is_same_v<T, StructuredModel>) {
                meta = {{"kind", "structured"}, {"d", m.d}, {"l", m.l()},
                        {"topo_order", m.structure.topo_order}};
                write_text(dir / "structure.txt", format_adjacency(m.structure.parents));
                write_classifiers(m.classifiers, dir);
            } else if constexpr (std::is_same_v<T, DependencyModel>) {
                meta = {{"kind", "dependency"}, {"d", m.d}, {"l", m.l()},
                        {"t_total", m.gibbs.t_total}, {"t_burn", m.gibbs.t_burn},
                        {"gibbs_seed", m.gibbs.seed}};
                write_text(dir / "structure.txt", format_adjacency(m.neighbors));
                write_classifiers(m.classifiers, dir);
            } else {
                meta = {{"kind", "ensemble"}, {"members", m.members.size()},
                        {"vote_threshold", m.vote_threshold}};
                for (std::size_t i = 0; i < m.members.size(); ++i)
                    save_model_bundle(m.members[i], dir / ("member_" + std::to_string(i)));
            }
        },
        model.variant());
    write_text(dir / "meta.json", meta.dump(2) + "\n");
}

MultiLabelModel load_model_bundle(const std::filesystem::path& dir) {
    json meta;
    try {
        meta = json::parse(read_text(dir / "meta.json"));
    } catch (const json::exception& e) {
        throw InputError("bad model meta in " + dir.string() + ": " + e.what());
    }
    const auto kind = meta.at("kind").get<std::string>();
    if (kind == "ensemble") {
        EnsembleModel ensemble;
        ensemble.vote_threshold = meta.at("vote_threshold").get<double>();
        const auto members = meta.at("members").get<std::size_t>();
        for (std::size_t i = 0; i < members; ++i)
            ensemble.members.push_back(load_model_bundle(dir / ("member_" + std::to_string(i))));
        return ensemble;
    }
    const auto d = meta.at("d").get<std::size_t>();
    const auto l = meta.at("l").get<std::size_t>();
    auto classifiers = read_classifiers(l, dir);
    auto parents = parse_adjacency(read_text(dir / "structure.txt"));
    if (parents.size() != l) throw InputError("structure file does not match label count");
    if (kind == "chain")
        return ChainModel{meta.at("order").get<std::vector<std::size_t>>(), std::move(classifiers),
                          d};
    if (kind == "structured") {
        auto structure = DirectedStructure::from_parents(std::move(parents));
        structure.topo_order = meta.at("topo_order").get<std::vector<std::size_t>>();
        return StructuredModel{std::move(structure), std::move(classifiers), d};
    }
    if (kind == "dependency")
        return DependencyModel{std::move(parents), std::move(classifiers), d,
                               GibbsConfig{meta.at("t_total").get<std::size_t>(),
                                           meta.at("t_burn").get<std::size_t>(),
                                           meta.at("gibbs_seed").get<std::uint64_t>()}};
    throw InputError("unknown model kind '" + kind + "'");
}

}  // namespace mlc
