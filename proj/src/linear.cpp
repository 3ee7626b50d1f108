#include "mlc/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlc/errors.hpp"
#include "mlc/rng.hpp"

namespace mlc {

namespace {

double dot(std::span<const double> w, std::span<const double> x) {
    double z = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * x[i];
    return z;
}

double clamp_prob(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

void check_shapes(const RealMatrix& features, std::span<const std::uint8_t> targets) {
    if (features.rows() == 0) throw InputError("training set is empty");
    if (features.rows() != targets.size())
        throw InputError("feature rows and target count differ");
}

}  // namespace

double sigmoid(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

LinearModel train_binary(const RealMatrix& features, std::span<const std::uint8_t> targets,
                         const SgdConfig& config) {
    check_shapes(features, targets);
    if (config.epochs < 1) throw ConfigError("epochs must be at least 1");
    if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (config.l2 < 0.0) throw ConfigError("l2 must be nonnegative");
    for (double v : features.data())
        if (!std::isfinite(v)) throw InputError("non-finite feature value");
    for (auto t : targets)
        if (t > 1) throw InputError("target is not binary");

    const std::size_t n = features.rows();
    LinearModel model{std::vector<double>(features.cols(), 0.0), 0.0};
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(config.seed);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        const double rate = config.learning_rate / std::sqrt(static_cast<double>(epoch));
        for (std::size_t i : order) {
            auto x = features.row(i);
            const double err = sigmoid(dot(model.weights, x) + model.bias) - targets[i];
            for (std::size_t j = 0; j < x.size(); ++j)
                model.weights[j] -= rate * (err * x[j] + config.l2 * model.weights[j]);
            model.bias -= rate * err;
        }
    }
    return model;
}

double predict_proba(const LinearModel& model, std::span<const double> x) {
    if (x.size() != model.d_in())
        throw InputError("input has " + std::to_string(x.size()) + " values, model expects " +
                         std::to_string(model.d_in()));
    return clamp_prob(sigmoid(dot(model.weights, x) + model.bias));
}

double logistic_loss(const LinearModel& model, const RealMatrix& features,
                     std::span<const std::uint8_t> targets, double l2) {
    check_shapes(features, targets);
    double total = 0.0;
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const double p = predict_proba(model, features.row(i));
        total -= targets[i] ? std::log(p) : std::log(1.0 - p);
    }
    double norm2 = 0.0;
    for (double w : model.weights) norm2 += w * w;
    return total / static_cast<double>(features.rows()) + 0.5 * l2 * norm2;
}

std::vector<double> logistic_gradient(const LinearModel& model, const RealMatrix& features,
                                      std::span<const std::uint8_t> targets, double l2) {
    check_shapes(features, targets);
    const std::size_t d = model.d_in();
    std::vector<double> grad(d + 1, 0.0);
    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto x = features.row(i);
        const double err = sigmoid(dot(model.weights, x) + model.bias) - targets[i];
        for (std::size_t j = 0; j < d; ++j) grad[j] += err * x[j];
        grad[d] += err;
    }
    const double inv_n = 1.0 / static_cast<double>(features.rows());
    for (std::size_t j = 0; j < d; ++j) grad[j] = grad[j] * inv_n + l2 * model.weights[j];
    grad[d] *= inv_n;
    return grad;
}

void to_json(nlohmann::json& j, const LinearModel& model) {
    j = nlohmann::json{{"weights", model.weights}, {"bias", model.bias}};
}

void from_json(const nlohmann::json& j, LinearModel& model) {
    j.at("weights").get_to(model.weights);
    j.at("bias").get_to(model.bias);
    for (double w : model.weights)
        if (!std::isfinite(w)) throw InputError("non-finite weight in model record");
}

}  // namespace mlc
