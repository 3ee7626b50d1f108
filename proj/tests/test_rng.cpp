#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mlc/rng.hpp"

using mlc::Rng;

TEST_CASE("same seed gives the same stream") {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        differs |= x != c.next();
    }
    CHECK(differs);
}

TEST_CASE("uniform and index stay in range") {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.index(7) < 7);
    }
    CHECK(rng.index(1) == 0);
}

TEST_CASE("normal variates have unit moments") {
    Rng rng(5);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("shuffle yields a permutation and covers positions uniformly") {
    Rng rng(9);
    std::vector<int> first_counts(4, 0);
    for (int trial = 0; trial < 40000; ++trial) {
        std::vector<int> v{0, 1, 2, 3};
        rng.shuffle(std::span(v));
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        REQUIRE(sorted == std::vector<int>{0, 1, 2, 3});
        ++first_counts[static_cast<std::size_t>(v[0])];
    }
    for (int c : first_counts) CHECK(std::abs(c - 10000) < 400);
}

TEST_CASE("derived seeds differ per stream") {
    CHECK(mlc::derive_seed(1, 0) != mlc::derive_seed(1, 1));
    CHECK(mlc::derive_seed(1, 0) != mlc::derive_seed(2, 0));
    CHECK(mlc::derive_seed(3, 4) == mlc::derive_seed(3, 4));
}
