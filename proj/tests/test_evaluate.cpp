// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "grocat/errors.hpp"
#include "grocat/evaluate.hpp"
#include "grocat/textprep.hpp"
#include "test_util.hpp"

using namespace grocat;

namespace {

RankedPrediction ranking(std::vector<VarietyId> order) {
    std::vector<RankedEntry> e;
    double s = 1.0;
    for (auto v : order) e.push_back({v, s -= 0.1});
    return RankedPrediction(std::move(e));
}

std::vector<RankedPrediction> random_rankings(std::size_t n, std::size_t classes, std::mt19937_64& rng) {
    std::vector<RankedPrediction> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<VarietyId> order(classes);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        out.push_back(ranking(order));
    }
    return out;
}

}  // namespace

TEST(Split, SizesAndDeterminism) {
    const auto a = split_dataset(100, 0.9, 5);
    EXPECT_EQ(a.train.size(), 90u);
    EXPECT_EQ(a.test.size(), 10u);
    EXPECT_TRUE(std::is_sorted(a.train.begin(), a.train.end()));
    std::set<std::size_t> all(a.train.begin(), a.train.end());
    all.insert(a.test.begin(), a.test.end());
    EXPECT_EQ(all.size(), 100u);
    const auto b = split_dataset(100, 0.9, 5);
    EXPECT_EQ(a.test, b.test);
    EXPECT_NE(a.test, split_dataset(100, 0.9, 6).test);
    EXPECT_THROW(split_dataset(100, 1.0, 1), ConfigError);
    EXPECT_THROW(split_dataset(3, 0.9, 1), DataError);
}

TEST(TopK, Hits) {
    const auto r = ranking({4, 2, 7});
    EXPECT_TRUE(topk_hit(r, 4, 1));
    EXPECT_FALSE(topk_hit(r, 7, 2));
    EXPECT_TRUE(topk_hit(r, 7, 3));
    EXPECT_FALSE(topk_hit(r, 9, 3));
    EXPECT_TRUE(topk_hit(ranking({1}), 1, 3));
}

// Six samples, three classes, worked by hand:
//   class 0: TP 1 FP 1 FN 1 -> P 1/2, R 1/2, F1 1/2
//   class 1: TP 2 FP 1 FN 0 -> P 2/3, R 1,   F1 4/5
//   class 2: TP 1 FP 0 FN 1 -> P 1,   R 1/2, F1 2/3
TEST(Metrics, HandConfusionTable) {
    const std::vector<VarietyId> truths = {0, 0, 1, 1, 2, 2};
    const std::vector<RankedPrediction> preds = {ranking({0, 1, 2}), ranking({1, 0, 2}), ranking({1, 2, 0}),
                                                 ranking({1, 0, 2}), ranking({2, 1, 0}), ranking({0, 2, 1})};
    const auto macro = evaluate_classifier(preds, truths, 1, Averaging::macro);
    EXPECT_DOUBLE_EQ(macro.accuracy, 4.0 / 6.0);
    EXPECT_NEAR(macro.precision, (0.5 + 2.0 / 3.0 + 1.0) / 3.0, 1e-15);
    EXPECT_NEAR(macro.recall, (0.5 + 1.0 + 0.5) / 3.0, 1e-15);
    EXPECT_NEAR(macro.f1, (0.5 + 0.8 + 2.0 / 3.0) / 3.0, 1e-15);
    // Per-class F1 equals 2PR/(P+R).
    const double p1 = 2.0 / 3.0, r1 = 1.0;
    EXPECT_NEAR(2 * p1 * r1 / (p1 + r1), 0.8, 1e-15);

    const auto counts = confusion_counts(std::vector<VarietyId>{0, 1, 1, 1, 2, 0}, truths, 3);
    EXPECT_EQ(counts.tp, (std::vector<std::size_t>{1, 2, 1}));
    EXPECT_EQ(counts.fp, (std::vector<std::size_t>{1, 1, 0}));
    EXPECT_EQ(counts.fn, (std::vector<std::size_t>{1, 0, 1}));
    EXPECT_EQ(counts.tn, (std::vector<std::size_t>{3, 3, 4}));

    // Top-2 collapse: samples 1 and 5 now hit (truth in first two).
    const auto top2 = evaluate_classifier(preds, truths, 2, Averaging::macro);
    EXPECT_DOUBLE_EQ(top2.accuracy, 1.0);
    EXPECT_DOUBLE_EQ(top2.f1, 1.0);
    const auto top2_plain = evaluate_classifier(preds, truths, 2, Averaging::macro, TopkRule::top1);
    EXPECT_DOUBLE_EQ(top2_plain.accuracy, 1.0);
    EXPECT_NEAR(top2_plain.precision, macro.precision, 1e-15);
}

TEST(Metrics, AllCorrect) {
    const std::vector<VarietyId> truths = {0, 1, 2};
    const std::vector<RankedPrediction> preds = {ranking({0}), ranking({1}), ranking({2})};
    for (auto mode : {Averaging::macro, Averaging::micro}) {
        const auto m = evaluate_classifier(preds, truths, 1, mode);
        EXPECT_EQ(m.accuracy, 1.0);
        EXPECT_EQ(m.precision, 1.0);
        EXPECT_EQ(m.recall, 1.0);
        EXPECT_EQ(m.f1, 1.0);
    }
}

TEST(Metrics, MicroIdentityAndBounds) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t classes = 2 + rng() % 6;
        const auto preds = random_rankings(20 + rng() % 30, classes, rng);
        std::vector<VarietyId> truths(preds.size());
        for (auto& t : truths) t = static_cast<VarietyId>(rng() % classes);
        const auto micro = evaluate_classifier(preds, truths, 1, Averaging::micro);
        EXPECT_EQ(micro.accuracy, micro.precision);
        EXPECT_EQ(micro.accuracy, micro.recall);
        EXPECT_EQ(micro.accuracy, micro.f1);
        double prev = 0.0;
        for (std::size_t k = 1; k <= 3; ++k) {
            const auto m = evaluate_classifier(preds, truths, k, Averaging::macro);
            for (double v : {m.accuracy, m.precision, m.recall, m.f1}) {
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
            EXPECT_GE(m.accuracy, prev);
            prev = m.accuracy;
        }
    }
}

TEST(Metrics, MacroSkipsAbsentClasses) {
    const std::vector<VarietyId> truths = {0, 0};
    const std::vector<RankedPrediction> preds = {ranking({0, 5}), ranking({5, 0})};
    const auto m = evaluate_classifier(preds, truths, 1, Averaging::macro);
    EXPECT_DOUBLE_EQ(m.precision, 1.0);  // only class 0 is averaged
    EXPECT_DOUBLE_EQ(m.recall, 0.5);
    EXPECT_THROW(evaluate_classifier({}, {}, 1, Averaging::macro), DataError);
}

TEST(Metrics, NamesRoundTrip) {
    EXPECT_EQ(parse_averaging("micro"), Averaging::micro);
    EXPECT_EQ(parse_topk_rule(topk_rule_name(TopkRule::top1)), TopkRule::top1);
    EXPECT_THROW(parse_averaging("weighted"), ConfigError);
}

TEST(Tuning, KnnGridShapeAndArgmax) {
    const Matrix train = grocat::testing::random_matrix(80, 4, 111);
    const auto labels = grocat::testing::random_labels(80, 3, 112);
    const Matrix test = grocat::testing::random_matrix(20, 4, 113);
    const auto tl = grocat::testing::random_labels(20, 3, 114);
    for (auto variant : {NeighborVariant::knn, NeighborVariant::fknn}) {
        const auto grid = tune_knn(train, labels, test, tl, 3, variant);
        ASSERT_EQ(grid.cells.size(), 135u);
        EXPECT_EQ(grid.cells.front().k, 1u);
        EXPECT_EQ(grid.cells[1].metric, MetricKind::cosine);
        for (std::size_t t = 0; t < 3; ++t) {
            double best = 0.0;
            for (const auto& c : grid.cells) best = std::max(best, c.accuracy[t]);
            EXPECT_EQ(grid.cells[grid.best[t]].accuracy[t], best);
        }
        for (const auto& c : grid.cells) {
            EXPECT_LE(c.accuracy[0], c.accuracy[1]);
            EXPECT_LE(c.accuracy[1], c.accuracy[2]);
        }
        // Cell values match a directly fitted model.
        const auto& cell = grid.cells[40];
        std::size_t hits = 0;
        if (variant == NeighborVariant::knn) {
            const auto m = fit_knn(train, labels, 3, cell.k, cell.metric);
            for (Eigen::Index q = 0; q < test.rows(); ++q) {
                hits += knn_predict(m, grocat::testing::row_of(test, q))[0].variety == tl[static_cast<std::size_t>(q)];
            }
        } else {
            const auto m = fit_fknn(train, labels, 3, cell.k, cell.metric);
            for (Eigen::Index q = 0; q < test.rows(); ++q) {
                hits += fknn_predict(m, grocat::testing::row_of(test, q))[0].variety == tl[static_cast<std::size_t>(q)];
            }
        }
        EXPECT_DOUBLE_EQ(cell.accuracy[0], static_cast<double>(hits) / 20.0);
    }
}

TEST(Tuning, KnnGridIgnoresRequestOrder) {
    const Matrix train = grocat::testing::random_matrix(40, 3, 121);
    const auto labels = grocat::testing::random_labels(40, 3, 122);
    const Matrix test = grocat::testing::random_matrix(10, 3, 123);
    const auto tl = grocat::testing::random_labels(10, 3, 124);
    KnnTuneOptions fwd;
    fwd.ks = {1, 3, 5};
    KnnTuneOptions rev = fwd;
    std::reverse(rev.ks.begin(), rev.ks.end());
    std::reverse(rev.metrics.begin(), rev.metrics.end());
    const auto a = tune_knn(train, labels, test, tl, 3, NeighborVariant::fknn, fwd);
    const auto b = tune_knn(train, labels, test, tl, 3, NeighborVariant::fknn, rev);
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        EXPECT_EQ(a.cells[i].k, b.cells[i].k);
        EXPECT_EQ(a.cells[i].metric, b.cells[i].metric);
        EXPECT_EQ(a.cells[i].accuracy, b.cells[i].accuracy);
    }
    EXPECT_EQ(a.best, b.best);
}

TEST(Tuning, MlpGridShape) {
    const Matrix train = grocat::testing::random_matrix(30, 3, 131);
    const auto labels = grocat::testing::random_labels(30, 2, 132);
    const Matrix test = grocat::testing::random_matrix(10, 3, 133);
    const auto tl = grocat::testing::random_labels(10, 2, 134);
    MlpTuneOptions opts;
    opts.nodes = {6, 4, 5};
    opts.epochs = {3, 1, 2};
    opts.base.hidden_layers = 1;
    const auto grid = tune_mlp(train, labels, test, tl, 2, opts);
    ASSERT_EQ(grid.cells.size(), 9u);
    EXPECT_EQ(grid.cells[0].nodes, 4u);
    EXPECT_EQ(grid.cells[0].epochs, 1u);
    EXPECT_EQ(grid.cells[8].nodes, 6u);
    EXPECT_EQ(grid.cells[8].epochs, 3u);
}

TEST(Synth, Construction) {
    SynthConfig cfg;
    const auto c = synth_catalog(cfg);
    EXPECT_EQ(c.size(), 2000u);
    EXPECT_EQ(c.varieties.size(), 20u);
    const auto again = synth_catalog(cfg);
    EXPECT_EQ(c.products, again.products);
    const auto sigs = synth_signatures(cfg);
    // Every product carries a word owned by its variety alone.
    for (const auto& p : c.products) {
        const auto words = preprocess_product(p, {}).words;
        const auto& sig = sigs[c.varieties.id(p.variety)];
        EXPECT_TRUE(std::any_of(words.begin(), words.end(),
                                [&](const std::string& w) { return std::find(sig.begin(), sig.end(), w) != sig.end(); }))
            << p.name;
    }
    std::set<std::string> all;
    for (const auto& s : sigs) all.insert(s.begin(), s.end());
    EXPECT_EQ(all.size(), 20u * cfg.words_per_signature);

    SynthConfig shared = cfg;
    shared.overlap = 0.5;
    const auto ss = synth_signatures(shared);
    EXPECT_EQ(ss[0][4], ss[1][0]);  // second half borrowed from the next variety
    SynthConfig bad;
    bad.varieties = 1;
    EXPECT_THROW(synth_catalog(bad), ConfigError);
}
