#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "mlc/matrix.hpp"

namespace mlc {

/// Logistic-link linear model: p(y=1|x) = sigmoid(w.x + b).
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;

    std::size_t d_in() const noexcept { return weights.size(); }

    friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

struct SgdConfig {
    int epochs = 100;
    double learning_rate = 0.1;  // decays as lr / sqrt(epoch)
    double l2 = 1e-4;
    std::uint64_t seed = 0;

    friend bool operator==(const SgdConfig&, const SgdConfig&) = default;
};

inline constexpr double kProbFloor = 1e-12;

double sigmoid(double z) noexcept;

/// Trains by shuffled-order SGD on the L2-regularized mean logistic loss.
LinearModel train_binary(const RealMatrix& features, std::span<const std::uint8_t> targets,
                         const SgdConfig& config);

/// Probability clamped to [1e-12, 1 - 1e-12].
double predict_proba(const LinearModel& model, std::span<const double> x);

/// Mean negative log-likelihood plus (l2/2)||w||^2 (bias unpenalized).
double logistic_loss(const LinearModel& model, const RealMatrix& features,
                     std::span<const std::uint8_t> targets, double l2);

/// Gradient of logistic_loss; the last entry is the bias component.
std::vector<double> logistic_gradient(const LinearModel& model, const RealMatrix& features,
                                      std::span<const std::uint8_t> targets, double l2);

void to_json(nlohmann::json& j, const LinearModel& model);
void from_json(const nlohmann::json& j, LinearModel& model);

}  // namespace mlc
