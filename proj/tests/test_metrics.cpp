#include <doctest.h>

#include <cmath>

#include "mlc/errors.hpp"
#include "mlc/metrics.hpp"
#include "mlc/rng.hpp"
#include "oracles.hpp"

using namespace mlc;

namespace {

BitMatrix bits(const std::vector<std::vector<std::uint8_t>>& rows) {
    BitMatrix m(0, rows.front().size());
    for (const auto& r : rows) m.append_row(r);
    return m;
}

std::vector<std::vector<int>> nested(const BitMatrix& m) {
    std::vector<std::vector<int>> out(m.rows(), std::vector<int>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
    return out;
}

RealMatrix real(const std::vector<std::vector<double>>& rows) {
    RealMatrix m(0, rows.front().size());
    for (const auto& r : rows) m.append_row(r);
    return m;
}

}  // namespace

TEST_CASE("hamming score") {
    const BitMatrix y = bits({{1, 0, 1}});
    CHECK(hamming_score(y, y) == 1.0);
    CHECK(hamming_score(y, bits({{1, 1, 1}})) == doctest::Approx(2.0 / 3.0));
    CHECK(hamming_score(y, bits({{0, 1, 0}})) == 0.0);
}

TEST_CASE("exact match") {
    const BitMatrix y = bits({{1, 0}, {0, 1}});
    CHECK(exact_match(y, y) == 1.0);
    CHECK(exact_match(y, bits({{1, 0}, {1, 1}})) == 0.5);
    CHECK(exact_match(y, bits({{0, 0}, {0, 0}})) == 0.0);
}

TEST_CASE("jaccard accuracy") {
    CHECK(jaccard_accuracy(bits({{1, 0, 1}}), bits({{1, 1, 0}})) == doctest::Approx(1.0 / 3.0));
    CHECK(jaccard_accuracy(bits({{1, 1, 0}}), bits({{1, 1, 0}})) == 1.0);
    CHECK(jaccard_accuracy(bits({{0, 0, 0}}), bits({{0, 0, 0}})) == 1.0);
}

TEST_CASE("metrics reject shape mismatches and empty input") {
    CHECK_THROWS_AS(hamming_score(bits({{1, 0}}), bits({{1, 0, 1}})), InputError);
    CHECK_THROWS_AS(exact_match(bits({{1}}), bits({{1}, {0}})), InputError);
    CHECK_THROWS_AS(jaccard_accuracy(BitMatrix(0, 2), BitMatrix(0, 2)), InputError);
}

TEST_CASE("metrics agree with the reference implementation and obey their invariants") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.index(8), l = 1 + rng.index(6);
        BitMatrix y(n, l), p(n, l);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < l; ++c) {
                y(r, c) = rng.bernoulli(0.4);
                p(r, c) = rng.bernoulli(0.3) ? 1 - y(r, c) : y(r, c);
            }
        const auto ref = oracle::label_scores(nested(y), nested(p));
        const EvaluationReport rep = evaluate(y, p);
        CHECK(rep.hamming == doctest::Approx(ref.hamming).epsilon(1e-12));
        CHECK(rep.exact_match == doctest::Approx(ref.exact).epsilon(1e-12));
        CHECK(rep.jaccard_accuracy == doctest::Approx(ref.jaccard).epsilon(1e-12));
        CHECK(rep.exact_match <= rep.hamming + 1e-12);
        CHECK(rep.exact_match <= rep.jaccard_accuracy + 1e-12);

        // Reordering rows changes nothing.
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        rng.shuffle(std::span(perm));
        const BitMatrix ys = y.select_rows(perm), ps = p.select_rows(perm);
        CHECK(hamming_score(ys, ps) == doctest::Approx(rep.hamming));
        CHECK(jaccard_accuracy(ys, ps) == doctest::Approx(rep.jaccard_accuracy));
    }
}

TEST_CASE("average ranks") {
    CHECK(average_ranks(real({{0.9, 0.8}, {0.5, 0.4}}), true) == std::vector<double>{1.0, 2.0});
    CHECK(average_ranks(real({{0.9, 0.8}, {0.5, 0.4}}), false) == std::vector<double>{2.0, 1.0});
    CHECK(average_ranks(real({{0.7, 0.1}, {0.7, 0.1}}), true) == std::vector<double>{1.5, 1.5});
    CHECK(average_ranks(real({{0.3}}), true) == std::vector<double>{1.0});
    const auto three = average_ranks(real({{0.9, 0.2}, {0.5, 0.5}, {0.5, 0.9}}), true);
    CHECK(three[0] == doctest::Approx(2.0));   // ranks 1 and 3
    CHECK(three[1] == doctest::Approx(2.25));  // ranks 2.5 and 2
    CHECK(three[2] == doctest::Approx(1.75));  // ranks 2.5 and 1
}

TEST_CASE("Nemenyi critical distance") {
    CHECK(nemenyi_cd(2, 6, 1.0) == doctest::Approx(std::sqrt(6.0 / 36.0)));
    CHECK(nemenyi_cd(2, 6, 1.0) == doctest::Approx(0.4082).epsilon(1e-4));
    CHECK(nemenyi_cd(7, 8, 2.693) == doctest::Approx(2.909).epsilon(1e-3));
    CHECK(nemenyi_cd(5, 12, 2.0) == doctest::Approx(nemenyi_cd(5, 6, 2.0) / std::sqrt(2.0)));
    CHECK_THROWS_AS(nemenyi_cd(1, 5, 2.0), ConfigError);
    CHECK_THROWS_AS(nemenyi_cd(3, 0, 2.0), ConfigError);
}

TEST_CASE("report CSV round trip") {
    EvaluationReport r;
    r.dataset = "music";
    r.method = "ct";
    r.hamming = 0.812345;
    r.exact_match = 0.25;
    r.jaccard_accuracy = 0.5;
    r.train_seconds = 1.5;
    r.test_seconds = 0.125;
    const std::string row = report_csv_row(r);
    CHECK(row == "music,ct,0.812345,0.250000,0.500000,1.500,0.125");
    const auto parsed = parse_report_csv(std::string(kReportCsvHeader) + "\n" + row + "\n");
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].method == "ct");
    CHECK(parsed[0].hamming == doctest::Approx(0.812345));
    CHECK(parsed[0].test_seconds == doctest::Approx(0.125));
    const nlohmann::json j = r;
    CHECK(j.at("method") == "ct");
}
