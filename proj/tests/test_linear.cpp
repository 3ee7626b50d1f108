#include <doctest.h>

#include <cmath>
#include <limits>

#include "mlc/errors.hpp"
#include "mlc/linear.hpp"
#include "mlc/rng.hpp"

using namespace mlc;

namespace {

RealMatrix random_features(std::size_t n, std::size_t d, Rng& rng) {
    RealMatrix x(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) x(r, c) = rng.normal();
    return x;
}

}  // namespace

TEST_CASE("predict_proba examples") {
    const LinearModel zero{{0.0, 0.0}, 0.0};
    const double x1[] = {3.0, -7.0};
    CHECK(predict_proba(zero, x1) == 0.5);

    const LinearModel unit{{1.0}, 0.0};
    const double at_zero[] = {0.0};
    const double at_ln3[] = {std::log(3.0)};
    CHECK(predict_proba(unit, at_zero) == 0.5);
    CHECK(predict_proba(unit, at_ln3) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("predict_proba rejects a dimension mismatch") {
    const LinearModel m{{1.0, 2.0}, 0.0};
    const double x[] = {1.0};
    CHECK_THROWS_AS(predict_proba(m, x), InputError);
}

TEST_CASE("output stays strictly inside (0, 1)") {
    const LinearModel m{{1.0}, 0.0};
    const double big[] = {1000.0};
    const double small[] = {-1000.0};
    CHECK(predict_proba(m, big) <= 1.0 - kProbFloor);
    CHECK(predict_proba(m, big) < 1.0);
    CHECK(predict_proba(m, small) >= kProbFloor);
    CHECK(sigmoid(-800.0) >= 0.0);
    CHECK(sigmoid(800.0) <= 1.0);
}

TEST_CASE("all-zero targets give probabilities below one half") {
    Rng rng(3);
    const RealMatrix x = random_features(40, 3, rng);
    const std::vector<std::uint8_t> y(40, 0);
    const LinearModel m = train_binary(x, y, SgdConfig{});
    for (std::size_t r = 0; r < x.rows(); ++r) CHECK(predict_proba(m, x.row(r)) < 0.5);
}

TEST_CASE("separable 1-D data is fit perfectly") {
    RealMatrix x(100, 1);
    std::vector<std::uint8_t> y(100);
    for (std::size_t r = 0; r < 100; ++r) {
        x(r, 0) = r < 50 ? -1.0 : 1.0;
        y[r] = r < 50 ? 0 : 1;
    }
    const LinearModel m = train_binary(x, y, SgdConfig{});
    for (std::size_t r = 0; r < 100; ++r) CHECK((predict_proba(m, x.row(r)) > 0.5) == (y[r] == 1));
}

TEST_CASE("training is deterministic for a fixed config") {
    Rng rng(8);
    const RealMatrix x = random_features(60, 4, rng);
    std::vector<std::uint8_t> y(60);
    for (auto& v : y) v = rng.bernoulli(0.4);
    SgdConfig cfg;
    cfg.seed = 12;
    CHECK(train_binary(x, y, cfg) == train_binary(x, y, cfg));
    cfg.seed = 13;
    const LinearModel other = train_binary(x, y, cfg);
    cfg.seed = 12;
    CHECK_FALSE(other == train_binary(x, y, cfg));
}

TEST_CASE("non-finite features are rejected") {
    RealMatrix x(2, 1, 0.0);
    x(1, 0) = std::numeric_limits<double>::quiet_NaN();
    const std::vector<std::uint8_t> y{0, 1};
    CHECK_THROWS_AS(train_binary(x, y, SgdConfig{}), InputError);
    x(1, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(train_binary(x, y, SgdConfig{}), InputError);
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + rng.index(10), d = 1 + rng.index(4);
        const RealMatrix x = random_features(n, d, rng);
        std::vector<std::uint8_t> y(n);
        for (auto& v : y) v = rng.bernoulli(0.5);
        LinearModel m{std::vector<double>(d), rng.normal()};
        for (auto& w : m.weights) w = rng.normal();
        const double l2 = 0.1;

        const auto grad = logistic_gradient(m, x, y, l2);
        REQUIRE(grad.size() == d + 1);
        const double h = 1e-6;
        for (std::size_t k = 0; k <= d; ++k) {
            LinearModel plus = m, minus = m;
            double& up = k < d ? plus.weights[k] : plus.bias;
            double& down = k < d ? minus.weights[k] : minus.bias;
            up += h;
            down -= h;
            const double fd = (logistic_loss(plus, x, y, l2) - logistic_loss(minus, x, y, l2)) / (2 * h);
            CHECK(std::abs(fd - grad[k]) <= 1e-4 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("one SGD step from zero moves along the negative gradient") {
    Rng rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const RealMatrix x = random_features(1, 3, rng);
        const std::vector<std::uint8_t> y{static_cast<std::uint8_t>(trial % 2)};
        SgdConfig cfg;
        cfg.epochs = 1;
        const LinearModel stepped = train_binary(x, y, cfg);
        const LinearModel start{std::vector<double>(3, 0.0), 0.0};
        const auto grad = logistic_gradient(start, x, y, cfg.l2);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(stepped.weights[k] == doctest::Approx(-cfg.learning_rate * grad[k]).epsilon(1e-9));
        CHECK(stepped.bias == doctest::Approx(-cfg.learning_rate * grad[3]).epsilon(1e-9));
    }
}

TEST_CASE("increasing a positively weighted feature never lowers the probability") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        LinearModel m{{std::abs(rng.normal()), rng.normal()}, rng.normal()};
        std::vector<double> x{rng.normal() * 5, rng.normal()};
        const double before = predict_proba(m, x);
        x[0] += std::abs(rng.normal());
        CHECK(predict_proba(m, x) >= before);
    }
}

TEST_CASE("JSON round trip") {
    const LinearModel m{{0.1, -2.5, 1e-17}, 0.3};
    const nlohmann::json j = m;
    CHECK(j.contains("weights"));
    CHECK(j.contains("bias"));
    CHECK(j.get<LinearModel>() == m);
    CHECK(nlohmann::json::parse(j.dump()).get<LinearModel>() == m);
}
