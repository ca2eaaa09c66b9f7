#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "infs/infs.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using Catch::Approx;

namespace {

infs::CorrelationMatrix matrix_from(const std::vector<std::vector<double>>& rows) {
    infs::CorrelationMatrix m;
    m.dim = rows.size();
    for (std::size_t i = 0; i < m.dim; ++i) m.feature_names.push_back("f" + std::to_string(i));
    m.values.resize(m.dim * m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t j = 0; j < m.dim; ++j) m.values[i * m.dim + j] = rows[i][j];
    }
    return m;
}

std::vector<infs::FeatureScore> named_scores(const std::vector<std::pair<std::string, double>>& v) {
    std::vector<infs::FeatureScore> scores;
    for (std::size_t i = 0; i < v.size(); ++i) {
        infs::FeatureScore s;
        s.name = v[i].first;
        s.index = i;
        s.micc_ud = v[i].second;
        scores.push_back(s);
    }
    return scores;
}

}  // namespace

TEST_CASE("score equals relevance over the maximum correlation gap", "[micc]") {
    auto corr = matrix_from({{1.0, 1.0, 0.0},
                             {1.0, 1.0, 0.5},
                             {0.0, 0.5, 1.0}});
    auto scores = infs::micc_ud_scores({0.6, 0.3, 0.3}, corr);
    // avg_corr(f0) = (1.0 + 0.0)/3 = 1/3; widest gap = 1/3 - 0.0 = 1/3.
    CHECK(scores[0].avg_corr == Approx(1.0 / 3.0));
    CHECK(scores[0].denominator == Approx(1.0 / 3.0));
    CHECK(scores[0].micc_ud == Approx(1.8));
    CHECK_FALSE(scores[0].clamped);
}

TEST_CASE("equal correlations drive the denominator into the clamp", "[micc]") {
    double c = 0.6;
    auto corr = matrix_from({{1.0, c, c},
                             {c, 1.0, c},
                             {c, c, 1.0}});
    auto scores = infs::micc_ud_scores({0.5, 0.5, 0.5}, corr);
    for (const auto& s : scores) {
        // avg = 2c/3 < c, so the best gap is negative and must clamp.
        CHECK(s.clamped);
        CHECK(s.denominator == infs::kDenomEpsilon);
        CHECK(s.micc_ud == Approx(0.5 / infs::kDenomEpsilon));
    }
}

TEST_CASE("two-feature scoring always clamps under the full-dimension divisor", "[micc]") {
    auto corr = matrix_from({{1.0, 0.5}, {0.5, 1.0}});
    auto scores = infs::micc_ud_scores({1.0, 1.0}, corr);
    // avg = 0.25, gap = 0.25 - 0.5 < 0.
    CHECK(scores[0].clamped);
    CHECK(scores[0].denominator == infs::kDenomEpsilon);

    auto relaxed = infs::micc_ud_scores({1.0, 1.0}, corr,
                                        infs::AvgCorrDivisor::dimension_minus_one);
    // With divisor d-1 the gap is exactly 0, still below epsilon.
    CHECK(relaxed[0].clamped);
}

TEST_CASE("scoring requires at least two features", "[micc]") {
    auto corr = matrix_from({{1.0}});
    CHECK_THROWS_AS(infs::micc_ud_scores({0.5}, corr), infs::ValidationError);
    auto two = matrix_from({{1.0, 0.1}, {0.1, 1.0}});
    CHECK_THROWS_AS(infs::micc_ud_scores({0.5}, two), infs::ValidationError);
}

TEST_CASE("rank_features sorts by score with index tie-break", "[micc]") {
    auto ranked = infs::rank_features(named_scores({{"a", 2.0}, {"b", 1.0}, {"c", 3.0}}));
    CHECK(ranked.names() == std::vector<std::string>{"c", "a", "b"});
    CHECK(ranked.entries[0].normalized_rank == Approx(1.0));
    CHECK(ranked.entries[1].normalized_rank == Approx(2.0 / 3.0));
    CHECK(ranked.entries[2].normalized_rank == Approx(1.0 / 3.0));

    auto single = infs::rank_features(named_scores({{"only", 1.0}}));
    CHECK(single.entries[0].normalized_rank == Approx(1.0));

    auto tied = infs::rank_features(named_scores({{"a", 1.0}, {"b", 1.0}}));
    CHECK(tied.names() == std::vector<std::string>{"a", "b"});

    CHECK_THROWS_AS(infs::rank_features({}), infs::ValidationError);
}

TEST_CASE("normalized ranks stay in (0,1] and strictly decrease", "[micc]") {
    infs::Rng rng(99);
    std::vector<std::pair<std::string, double>> raw;
    for (int i = 0; i < 17; ++i) raw.push_back({"f" + std::to_string(i), rng.uniform()});
    auto ranked = infs::rank_features(named_scores(raw));
    for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
        double r = ranked.entries[i].normalized_rank;
        REQUIRE(r > 0.0);
        REQUIRE(r <= 1.0);
        if (i > 0) {
            REQUIRE(r < ranked.entries[i - 1].normalized_rank);
            REQUIRE(ranked.entries[i].micc_ud <= ranked.entries[i - 1].micc_ud);
        }
    }
}

TEST_CASE("threshold statistic honours the configured semantics", "[micc]") {
    auto ranked = infs::rank_features(named_scores({{"a", 4.0}, {"b", 3.0}, {"c", 1.0}}));
    CHECK(infs::threshold_statistic(ranked, 0, infs::RankSemantics::order) == Approx(1.0));
    CHECK(infs::threshold_statistic(ranked, 2, infs::RankSemantics::order) == Approx(1.0 / 3.0));
    CHECK(infs::threshold_statistic(ranked, 0, infs::RankSemantics::score) == Approx(1.0));
    CHECK(infs::threshold_statistic(ranked, 1, infs::RankSemantics::score) == Approx(2.0 / 3.0));
    CHECK(infs::threshold_statistic(ranked, 2, infs::RankSemantics::score) == Approx(0.0));

    auto flat = infs::rank_features(named_scores({{"a", 2.0}, {"b", 2.0}}));
    CHECK(infs::threshold_statistic(flat, 1, infs::RankSemantics::score) == 1.0);
}

TEST_CASE("select_batch_subset keeps the ceiling prefix and recomputes ranks", "[micc]") {
    std::vector<std::pair<std::string, double>> raw;
    for (int i = 0; i < 10; ++i) raw.push_back({"f" + std::to_string(i), 10.0 - i});
    auto ranked = infs::rank_features(named_scores(raw));

    auto half = infs::select_batch_subset(ranked, 0.5);
    REQUIRE(half.entries.size() == 5);
    CHECK(half.entries[0].normalized_rank == Approx(1.0));
    CHECK(half.entries[4].normalized_rank == Approx(1.0 / 5.0));

    CHECK(infs::select_batch_subset(ranked, 1.0).entries.size() == 10);

    std::vector<std::pair<std::string, double>> seven(raw.begin(), raw.begin() + 7);
    auto cut = infs::select_batch_subset(infs::rank_features(named_scores(seven)), 0.3);
    CHECK(cut.entries.size() == 3);

    CHECK_THROWS_AS(infs::select_batch_subset(ranked, 0.0), infs::ValidationError);
    CHECK_THROWS_AS(infs::select_batch_subset(ranked, 1.0001), infs::ValidationError);
}

TEST_CASE("relevance of a label-copy feature equals the label entropy", "[micc]") {
    std::vector<int> labels{0, 1, 1, 0, 1, 0, 0, 1};
    infs::Column copy{"copy", {}};
    infs::Column other{"other", {0.1, 0.9, 0.3, 0.7, 0.2, 0.8, 0.4, 0.6}};
    for (int y : labels) copy.values.push_back(static_cast<double>(y));
    auto d = testsupport::make_dataset({copy, other}, labels);

    auto rel = infs::relevance_vector(d, 10);
    CHECK(rel[0] == Approx(oracles::entropy_bits(labels)).margin(1e-12));
}

TEST_CASE("noise features carry almost no relevance", "[micc]") {
    auto d = testsupport::planted_dataset(404, 1000, 1, 3);
    auto rel = infs::relevance_vector(d, 10);
    CHECK(rel[0] > 0.3);          // the planted feature
    for (std::size_t i = 1; i < rel.size(); ++i) CHECK(rel[i] <= 0.1);
}

TEST_CASE("tiny dataset relevance matches the joint-distribution oracle", "[micc]") {
    auto d = testsupport::make_dataset({{"a", {0.05, 0.35, 0.65, 0.95}},
                                        {"b", {0.95, 0.05, 0.95, 0.05}}},
                                       {0, 0, 1, 1});
    auto rel = infs::relevance_vector(d, 4);
    for (std::size_t i = 0; i < 2; ++i) {
        auto disc = infs::discretize(d.columns[i].values, 4);
        REQUIRE(rel[i] == Approx(oracles::mi_bits(disc, d.labels)).margin(1e-12));
    }
}

TEST_CASE("scores match a literal reference evaluation on random matrices", "[micc]") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto d = testsupport::random_dataset(1000 + seed, 20, 8);
        auto rel = infs::relevance_vector(d, 10);
        auto corr = infs::CorrelationMatrix::build(d);

        std::vector<std::vector<double>> table(corr.dim, std::vector<double>(corr.dim));
        for (std::size_t i = 0; i < corr.dim; ++i) {
            for (std::size_t j = 0; j < corr.dim; ++j) table[i][j] = corr.at(i, j);
        }

        for (bool full_d : {true, false}) {
            auto divisor = full_d ? infs::AvgCorrDivisor::full_dimension
                                  : infs::AvgCorrDivisor::dimension_minus_one;
            auto got = infs::micc_ud_scores(rel, corr, divisor);
            auto want = oracles::micc_scores(rel, table, full_d);
            for (std::size_t i = 0; i < got.size(); ++i) {
                REQUIRE(got[i].avg_corr == Approx(want[i].avg_corr).margin(1e-9));
                REQUIRE(got[i].denominator == Approx(want[i].denominator).margin(1e-9));
                REQUIRE(got[i].micc_ud == Approx(want[i].score).margin(1e-9));
                REQUIRE(got[i].clamped == want[i].clamped);
            }
        }
    }
}

TEST_CASE("clamp-path scoring matches the reference too", "[micc]") {
    // A duplicated column makes every pairwise correlation 1, forcing
    // negative gaps under the full-dimension divisor.
    infs::Column base{"base", {0.1, 0.4, 0.7, 0.2, 0.9, 0.5}};
    infs::Column copy1{"copy1", base.values};
    infs::Column copy2{"copy2", base.values};
    auto d = testsupport::make_dataset({base, copy1, copy2}, {0, 1, 0, 1, 0, 1});
    auto rel = infs::relevance_vector(d, 4);
    auto corr = infs::CorrelationMatrix::build(d);

    std::vector<std::vector<double>> table(3, std::vector<double>(3));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) table[i][j] = corr.at(i, j);
    }
    auto got = infs::micc_ud_scores(rel, corr);
    auto want = oracles::micc_scores(rel, table, true);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(got[i].clamped);
        REQUIRE(want[i].clamped);
        REQUIRE(got[i].micc_ud == Approx(want[i].score).margin(1e-3));  // huge values
        REQUIRE(got[i].denominator == want[i].denominator);
    }
}

TEST_CASE("ranking is invariant to the logarithm base of relevance", "[micc]") {
    auto d = testsupport::random_dataset(77, 40, 6);
    auto rel_bits = infs::relevance_vector(d, 10);
    auto corr = infs::CorrelationMatrix::build(d);

    std::vector<double> rel_nats = rel_bits;
    for (double& v : rel_nats) v *= std::log(2.0);

    auto ranked_bits = infs::rank_features(infs::micc_ud_scores(rel_bits, corr));
    auto ranked_nats = infs::rank_features(infs::micc_ud_scores(rel_nats, corr));
    CHECK(ranked_bits.names() == ranked_nats.names());
}

TEST_CASE("raising relevance never lowers a feature's position", "[micc]") {
    auto d = testsupport::random_dataset(31337, 30, 6);
    auto rel = infs::relevance_vector(d, 10);
    auto corr = infs::CorrelationMatrix::build(d);

    auto position = [](const infs::RankedList& list, const std::string& name) {
        auto names = list.names();
        return std::find(names.begin(), names.end(), name) - names.begin();
    };

    for (std::size_t target = 0; target < rel.size(); ++target) {
        auto before = infs::rank_features(infs::micc_ud_scores(rel, corr));
        auto boosted = rel;
        boosted[target] += 0.5;
        auto after = infs::rank_features(infs::micc_ud_scores(boosted, corr));
        std::string name = "f" + std::to_string(target);
        REQUIRE(position(after, name) <= position(before, name));
    }
}

TEST_CASE("scoring is bitwise identical across thread counts", "[micc]") {
    auto d = testsupport::random_dataset(2222, 60, 8);
    infs::set_thread_count(1);
    auto serial_rel = infs::relevance_vector(d, 10);
    auto serial_corr = infs::CorrelationMatrix::build(d);
    infs::set_thread_count(4);
    auto parallel_rel = infs::relevance_vector(d, 10);
    auto parallel_corr = infs::CorrelationMatrix::build(d);
    infs::set_thread_count(0);

    REQUIRE(serial_rel == parallel_rel);
    REQUIRE(serial_corr.values == parallel_corr.values);
}

TEST_CASE("score_batch produces the rho cut of the full ranking", "[micc]") {
    auto d = testsupport::planted_dataset(8, 300, 2, 6);
    auto batch = infs::score_batch(d, 10, 0.5);
    CHECK(batch.entries.size() == 4);  // ceil(0.5 * 8)
    CHECK(batch.entries[0].normalized_rank == 1.0);
}
