#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mlc/matrix.hpp"

namespace mlc {

struct StructuredModel;
struct DependencyModel;

/// Gibbs schedule: `t_total` sweeps, the first `t_burn` discarded.
struct GibbsConfig {
    std::size_t t_total = 100;
    std::size_t t_burn = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SampleBatch {
    std::vector<LabelVector> samples;

    std::size_t count() const noexcept { return samples.size(); }
    std::vector<double> means() const;
};

/// i.i.d. draws from a directed model, each label sampled in topological
/// order given the features and its already-sampled parents.
SampleBatch ancestral_sample(const StructuredModel& model, std::span<const double> x,
                             std::size_t n_samples, std::uint64_t seed);

/// Called after every sweep with the 1-based sweep index and chain state.
using SweepObserver = std::function<void(std::size_t, std::span<const std::uint8_t>)>;

/// Gibbs sampling over a dependency network, starting from all zeros. Each
/// sweep visits the labels in a fresh shuffled order and redraws each from
/// its conditional given the current neighbour states. Returns the mean
/// state over sweeps t_burn+1 .. t_total.
std::vector<double> gibbs_sample(const DependencyModel& model, std::span<const double> x,
                                 const GibbsConfig& config,
                                 const SweepObserver& observer = {});

/// Bit l = [mean_l > 0.5].
LabelVector marginal_map(std::span<const double> means);

}  // namespace mlc
