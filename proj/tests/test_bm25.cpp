// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include <gtest/gtest.h>

#include <cmath>

#include "bm25_corpus.hpp"
#include "grocat/errors.hpp"

using namespace grocat;
using grocat::testing::Bm25Corpus;

TEST(Bm25, ModelStatistics) {
    Bm25Corpus c;
    EXPECT_EQ(c.model.varieties, 3u);
    EXPECT_EQ(c.model.lengths, (std::vector<std::uint64_t>{5, 5, 2}));
    EXPECT_DOUBLE_EQ(c.model.average_length, 4.0);
    EXPECT_EQ(c.model.variety_frequency(*c.vocab.find("sugar")), 2u);
    EXPECT_EQ(c.model.variety_frequency(*c.vocab.find("wine")), 1u);
}

TEST(Bm25, MatchesHandComputedScores) {
    Bm25Corpus c;
    for (const auto& tc : grocat::testing::bm25_cases()) {
        const auto scores = score_all(c.model, c.query(tc.query));
        for (VarietyId v = 0; v < 3; ++v) {
            EXPECT_NEAR(scores[v], tc.scores[v], 1e-12) << tc.query[0];
            EXPECT_NEAR(score_variety(c.model, c.query(tc.query), v), tc.scores[v], 1e-12);
        }
    }
}

TEST(Bm25, SingleSharedWordAtAverageLength) {
    // |v| = avvl, N = 2, vf = 1: the weight is ln(3/2).
    std::vector<WordList> lists = {{{"a", "b"}}, {{"c", "d"}}};
    const auto vocab = build_vocabulary(lists);
    const std::vector<VarietyId> labels = {0, 1};
    const auto m = fit_score_model(build_variety_matrix(build_product_matrix(lists, vocab, labels, 2)));
    EXPECT_NEAR(score_variety(m, to_term_set({{"a"}}, vocab), 0), std::log(1.5), 1e-15);
}

TEST(Bm25, OkapiReference) {
    Bm25Corpus c;
    const auto a = score_all(c.model, c.query({"apple", "sugar"}), Bm25Variant::okapi);
    EXPECT_NEAR(a[0], 0.19281370523065772, 1e-12);
    EXPECT_NEAR(a[1], -0.6562431371008349, 1e-12);
    EXPECT_EQ(a[2], 0.0);
    const auto b = score_all(c.model, c.query({"milk", "red"}), Bm25Variant::okapi);
    EXPECT_NEAR(b[1], 0.6562431371008349, 1e-12);
    EXPECT_NEAR(b[2], 0.6421807841629599, 1e-12);
}

TEST(Bm25, RankingOrderAndTies) {
    Bm25Corpus c;
    const auto r = rank_varieties(c.model, c.query({"sugar"}));
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].variety, 0u);  // tie with variety 1 goes to the lower id
    EXPECT_EQ(r[1].variety, 1u);
    EXPECT_EQ(r[2].variety, 2u);
    const auto empty = rank_varieties(c.model, {});
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(empty[i].variety, i);
        EXPECT_EQ(empty[i].score, 0.0);
    }
}

TEST(Bm25, ScoresAreNonNegativeAndAdditive) {
    Bm25Corpus c;
    const std::vector<std::string> all = c.vocab.words();
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const auto both = score_all(c.model, c.query({all[i], all[j]}));
            const auto si = score_all(c.model, c.query({all[i]}));
            const auto sj = score_all(c.model, c.query({all[j]}));
            for (std::size_t v = 0; v < 3; ++v) {
                EXPECT_GE(both[v], 0.0);
                EXPECT_NEAR(both[v], si[v] + sj[v], 1e-12);
            }
        }
    }
}

TEST(Bm25, Errors) {
    Bm25Corpus c;
    EXPECT_THROW(score_variety(c.model, {}, 3), DataError);
    EXPECT_THROW(fit_score_model(VarietyMatrix(2, 2, {0, 0, 0, 0})), DataError);
}
