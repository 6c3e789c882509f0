// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include <gtest/gtest.h>

#include <cmath>

#include "grocat/boosted.hpp"
#include "grocat/errors.hpp"
#include "test_util.hpp"

using namespace grocat;
using grocat::testing::random_labels;
using grocat::testing::random_matrix;
using grocat::testing::row_of;

TEST(Gbt, GainAndLeafWeight) {
    EXPECT_DOUBLE_EQ(leaf_weight(2.0, 3.0, 1.0), -0.5);
    EXPECT_EQ(leaf_weight(1.0, 0.0, 0.0), 0.0);
    // G_L = -2, G_R = 2, H = 2 each, lambda 1: 1/2 (4/3 + 4/3 - 0) = 4/3
    EXPECT_DOUBLE_EQ(split_gain(-2, 2, 2, 2, 1.0, 0.0), 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(split_gain(-2, 2, 2, 2, 1.0, 0.5), 4.0 / 3.0 - 0.5);
}

TEST(Gbt, SingleTreeOnHandExample) {
    Matrix x(4, 1);
    x << 1, 2, 3, 4;
    const std::vector<double> g = {-1, -1, 1, 1}, h = {1, 1, 1, 1};
    GbtConfig cfg;
    cfg.max_depth = 1;
    const RegressionTree t = fit_tree(x, SortedFeatures(x), g, h, cfg, 1.0);
    ASSERT_EQ(t.leaf_count(), 2u);
    EXPECT_EQ(t.nodes()[0].feature, 0);
    EXPECT_DOUBLE_EQ(t.nodes()[0].threshold, 2.5);
    EXPECT_DOUBLE_EQ(t.predict(std::vector<double>{1.5}), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(t.predict(std::vector<double>{3.0}), -2.0 / 3.0);
    EXPECT_DOUBLE_EQ(t.predict(std::vector<double>{2.5}), -2.0 / 3.0);  // x == threshold goes right
}

TEST(Gbt, AdjacentFloatThreshold) {
    Matrix x(2, 1);
    const double a = 1.0, b = std::nextafter(1.0, 2.0);
    x << a, b;
    const std::vector<double> g = {-1, 1}, h = {1, 1};
    GbtConfig cfg;
    cfg.min_child_weight = 0.5;
    const RegressionTree t = fit_tree(x, SortedFeatures(x), g, h, cfg, 1.0);
    ASSERT_EQ(t.leaf_count(), 2u);
    EXPECT_GT(t.predict(std::vector<double>{a}), 0.0);
    EXPECT_LT(t.predict(std::vector<double>{b}), 0.0);
}

TEST(Gbt, RespectsDepthAndChildWeight) {
    const Matrix x = random_matrix(200, 4, 41);
    std::vector<double> g(200), h(200, 0.25);
    for (int i = 0; i < 200; ++i) g[static_cast<std::size_t>(i)] = x(i, 0) > 0 ? 0.5 : -0.5 + 0.1 * x(i, 1);
    GbtConfig cfg;
    cfg.max_depth = 3;
    cfg.min_child_weight = 5.0;
    const RegressionTree t = fit_tree(x, SortedFeatures(x), g, h, cfg, 1.0);
    EXPECT_LE(t.depth(), 3u);
    for (const auto& n : t.nodes()) EXPECT_GE(n.hess_sum, 5.0);
    GbtConfig strict = cfg;
    strict.min_child_weight = 60.0;  // no split can give both children 60 of the 50 total
    EXPECT_EQ(fit_tree(x, SortedFeatures(x), g, h, strict, 1.0).leaf_count(), 1u);
}

TEST(Gbt, LeafValuesMinimizeQuadraticObjective) {
    const Matrix x = random_matrix(300, 5, 51);
    std::vector<double> g(300), h(300);
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(0.05, 0.25);
    for (std::size_t i = 0; i < 300; ++i) {
        g[i] = std::sin(3.0 * x(static_cast<Eigen::Index>(i), 1)) + 0.1 * x(static_cast<Eigen::Index>(i), 2);
        h[i] = u(rng);
    }
    GbtConfig cfg;
    cfg.max_depth = 4;
    const RegressionTree t = fit_tree(x, SortedFeatures(x), g, h, cfg, 1.0);
    for (const auto& n : t.nodes()) {
        if (!n.is_leaf()) continue;
        auto q = [&](double w) { return n.grad_sum * w + 0.5 * (n.hess_sum + cfg.lambda) * w * w; };
        EXPECT_LT(q(n.value), q(n.value + 1e-3));
        EXPECT_LT(q(n.value), q(n.value - 1e-3));
    }
}

TEST(Gbt, BaseScoreIsLogPrior) {
    const Matrix x = random_matrix(4, 2, 61);
    const std::vector<VarietyId> y = {0, 0, 0, 2};
    GbtConfig cfg;
    cfg.rounds = 1;
    const auto m = fit_gbt(x, y, 3, cfg);
    EXPECT_DOUBLE_EQ(m.base_score[0], std::log(0.75));
    EXPECT_DOUBLE_EQ(m.base_score[1], std::log(1e-6));
    EXPECT_DOUBLE_EQ(m.base_score[2], std::log(0.25));
}

TEST(Gbt, SingleClassTrainingIsConstant) {
    const Matrix x = random_matrix(10, 3, 62);
    const std::vector<VarietyId> y(10, 1);
    const auto m = fit_gbt(x, y, 3, GbtConfig{});
    ASSERT_TRUE(m.constant_class.has_value());
    EXPECT_EQ(gbt_predict(m, row_of(x, 0))[0].variety, 1u);
    EXPECT_TRUE(m.rounds.empty());
}

TEST(Gbt, ObjectiveDecreasesAndFitsSeparableData) {
    const Matrix x = random_matrix(240, 3, 71);
    std::vector<VarietyId> y(240);
    for (std::size_t i = 0; i < 240; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        y[i] = static_cast<VarietyId>((x(r, 0) > 0 ? 1 : 0) + (x(r, 1) > 0 ? 2 : 0));
    }
    GbtConfig cfg;
    cfg.rounds = 20;
    cfg.learning_rate = 0.3;
    cfg.max_depth = 3;
    GbtTrace trace;
    const auto m = fit_gbt(x, y, 4, cfg, &trace);
    ASSERT_EQ(trace.objective.size(), 21u);
    for (std::size_t r = 1; r < trace.objective.size(); ++r) EXPECT_LE(trace.objective[r], trace.objective[r - 1] + 1e-9);
    EXPECT_NEAR(trace.objective.back(), gbt_objective(m, x, y), 1e-9);
    std::size_t right = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Vector p = gbt_probabilities(m, row_of(x, i));
        EXPECT_NEAR(p.sum(), 1.0, 1e-12);
        right += gbt_predict(m, row_of(x, i))[0].variety == y[static_cast<std::size_t>(i)] ? 1 : 0;
    }
    EXPECT_GE(right, 230u);
}

TEST(Gbt, ConfigValidation) {
    const Matrix x = random_matrix(5, 2, 1);
    const auto y = random_labels(5, 2, 1);
    GbtConfig bad;
    bad.learning_rate = 0.0;
    EXPECT_THROW(fit_gbt(x, y, 2, bad), ConfigError);
    bad = {};
    bad.lambda = -1.0;
    EXPECT_THROW(fit_gbt(x, y, 2, bad), ConfigError);
    Matrix nan = x;
    nan(0, 0) = std::nan("");
    EXPECT_THROW(fit_gbt(nan, y, 2, GbtConfig{}), NumericError);
}
