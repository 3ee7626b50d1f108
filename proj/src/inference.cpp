#include "mlc/inference.hpp"

#include <numeric>

#include "mlc/errors.hpp"
#include "mlc/models.hpp"
#include "mlc/rng.hpp"

namespace mlc {

void GibbsConfig::validate() const {
    if (t_burn >= t_total)
        throw ConfigError("Gibbs schedule needs t_burn < t_total (t_burn=" +
                          std::to_string(t_burn) + ", t_total=" + std::to_string(t_total) + ")");
}

std::vector<double> SampleBatch::means() const {
    if (samples.empty()) return {};
    std::vector<double> out(samples.front().size(), 0.0);
    for (const auto& s : samples)
        for (std::size_t i = 0; i < s.size(); ++i) out[i] += s[i];
    for (auto& v : out) v /= static_cast<double>(samples.size());
    return out;
}

SampleBatch ancestral_sample(const StructuredModel& model, std::span<const double> x,
                             std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
    if (x.size() != model.d) throw InputError("feature vector length does not match model");
    Rng rng(seed);
    SampleBatch batch;
    batch.samples.reserve(n_samples);
    std::vector<double> input;
    for (std::size_t s = 0; s < n_samples; ++s) {
        LabelVector y(model.l(), 0);
        for (std::size_t label : model.structure.topo_order) {
            input.assign(x.begin(), x.end());
            for (std::size_t p : model.structure.parents[label]) input.push_back(y[p]);
            y[label] = rng.bernoulli(predict_proba(model.classifiers[label], input));
        }
        batch.samples.push_back(std::move(y));
    }
    return batch;
}

std::vector<double> gibbs_sample(const DependencyModel& model, std::span<const double> x,
                                 const GibbsConfig& config, const SweepObserver& observer) {
    config.validate();
    if (x.size() != model.d) throw InputError("feature vector length does not match model");
    const std::size_t l = model.l();
    Rng rng(config.seed);
    LabelVector state(l, 0);
    std::vector<double> sums(l, 0.0);
    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> input(x.begin(), x.end());

    for (std::size_t t = 1; t <= config.t_total; ++t) {
        rng.shuffle(std::span(order));
        for (std::size_t label : order) {
            input.resize(model.d);
            for (std::size_t ne : model.neighbors[label]) input.push_back(state[ne]);
            state[label] = rng.bernoulli(predict_proba(model.classifiers[label], input));
        }
        if (t > config.t_burn)
            for (std::size_t i = 0; i < l; ++i) sums[i] += state[i];
        if (observer) observer(t, state);
    }
    const double kept = static_cast<double>(config.t_total - config.t_burn);
    for (auto& s : sums) s /= kept;
    return sums;
}

LabelVector marginal_map(std::span<const double> means) {
    LabelVector out(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) out[i] = means[i] > 0.5;
    return out;
}

}  // namespace mlc
