// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include <gtest/gtest.h>

#include <cmath>

#include "grocat/errors.hpp"
#include "grocat/mlp.hpp"
#include "test_util.hpp"

using namespace grocat;
using grocat::testing::random_labels;
using grocat::testing::random_matrix;
using grocat::testing::row_of;

namespace {

// 2-2-2 network with fixed weights and its three-sample batch.
struct Tiny {
    MlpModel model;
    Matrix x{3, 2};
    std::vector<VarietyId> y = {0, 1, 1};

    Tiny() {
        DenseLayer l1, l2;
        l1.weights.resize(2, 2);
        l1.weights << 0.5, -0.3, 0.8, 0.2;
        l1.bias.resize(2);
        l1.bias << 0.1, -0.1;
        l2.weights.resize(2, 2);
        l2.weights << 0.4, -0.6, -0.2, 0.9;
        l2.bias.resize(2);
        l2.bias << 0.05, -0.05;
        model.layers = {l1, l2};
        x << 1.0, 2.0, -1.0, 0.5, 0.3, -0.7;
    }
};

}  // namespace

// Reference values from an independent NumPy implementation.
TEST(Mlp, LossAndGradientsMatchReference) {
    Tiny t;
    const auto lg = mlp_loss_and_gradients(t.model, t.x, t.y);
    EXPECT_NEAR(lg.loss, 1.1285297256996445, 1e-14);
    const double gw1[2][2] = {{-0.12940826693920995, -0.4129726113996758}, {0.41245686591798014, 0.8249137318359603}};
    const double gw2[2][2] = {{0.09091255853817654, -0.30246836833985213}, {-0.09091255853817654, 0.30246836833985213}};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            EXPECT_NEAR(lg.grads[0].weights(i, j), gw1[i][j], 1e-14);
            EXPECT_NEAR(lg.grads[1].weights(i, j), gw2[i][j], 1e-14);
        }
    }
    EXPECT_NEAR(lg.grads[0].bias(0), -0.04640114827391831, 1e-14);
    EXPECT_NEAR(lg.grads[0].bias(1), 0.41245686591798014, 1e-14);
    EXPECT_NEAR(lg.grads[1].bias(0), 0.09765781536978285, 1e-14);
    const Matrix p = mlp_forward_batch(t.model, t.x);
    EXPECT_NEAR(p(0, 0), 0.1750862681640398, 1e-14);
    EXPECT_NEAR(p(2, 1), 0.40709200953363117, 1e-14);
}

TEST(Mlp, FirstAdamStepMatchesReference) {
    Tiny t;
    MlpConfig cfg;
    cfg.epochs = 1;
    cfg.batch_size = 3;
    cfg.learning_rate = 0.01;
    const auto r = train_mlp(t.model, t.x, t.y, cfg);
    EXPECT_NEAR(r.model.layers[0].weights(0, 0), 0.5099999992272519, 1e-12);
    EXPECT_NEAR(r.model.layers[0].weights(1, 1), 0.1900000001212248, 1e-12);
    EXPECT_NEAR(r.model.layers[1].bias(0), 0.04000000102398348, 1e-12);
    EXPECT_NEAR(r.loss_trace[0], 1.1285297256996445, 1e-12);
    EXPECT_NEAR(mlp_loss_and_gradients(r.model, t.x, t.y).loss, 1.0969569983864271, 1e-12);
}

TEST(Mlp, InitIsSeededHeNormal) {
    const std::vector<std::size_t> widths = {400, 300, 10};
    const auto a = init_mlp(widths, 7);
    const auto b = init_mlp(widths, 7);
    const auto c = init_mlp(widths, 8);
    EXPECT_EQ(a.layers[0].weights, b.layers[0].weights);
    EXPECT_NE(a.layers[0].weights, c.layers[0].weights);
    EXPECT_EQ(a.widths(), widths);
    const auto& w = a.layers[0].weights;
    const double var = w.array().square().mean() - std::pow(w.mean(), 2);
    EXPECT_NEAR(var, 2.0 / 400.0, 0.1 * 2.0 / 400.0);
    EXPECT_EQ(a.layers[1].bias.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mlp, TrainingLowersLossAndIsDeterministic) {
    const Matrix x = random_matrix(120, 4, 81);
    std::vector<VarietyId> y(120);
    for (std::size_t i = 0; i < 120; ++i) y[i] = x(static_cast<Eigen::Index>(i), 0) > 0 ? 1 : 0;
    MlpConfig cfg;
    cfg.hidden_layers = 2;
    cfg.nodes = 16;
    cfg.epochs = 30;
    cfg.learning_rate = 0.01;
    const auto a = train_mlp(init_mlp(cfg, 4, 2), x, y, cfg);
    const auto b = train_mlp(init_mlp(cfg, 4, 2), x, y, cfg);
    EXPECT_EQ(a.loss_trace, b.loss_trace);
    EXPECT_LT(a.loss_trace.back(), 0.5 * a.loss_trace.front());
    const Vector p = mlp_forward(a.model, row_of(x, 3));
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
}

TEST(Mlp, EpochSnapshotsEqualShorterRuns) {
    const Matrix x = random_matrix(50, 3, 91);
    const auto y = random_labels(50, 3, 92);
    MlpConfig cfg;
    cfg.hidden_layers = 1;
    cfg.nodes = 8;
    cfg.epochs = 6;
    cfg.batch_size = 8;
    MlpModel at4;
    train_mlp(init_mlp(cfg, 3, 3), x, y, cfg, [&](std::size_t e, const MlpModel& m) {
        if (e == 4) at4 = m;
    });
    MlpConfig short_cfg = cfg;
    short_cfg.epochs = 4;
    const auto direct = train_mlp(init_mlp(cfg, 3, 3), x, y, short_cfg);
    EXPECT_EQ(at4.layers[0].weights, direct.model.layers[0].weights);
    EXPECT_EQ(at4.layers[1].bias, direct.model.layers[1].bias);
}

TEST(Mlp, Errors) {
    MlpConfig cfg;
    cfg.nodes = 0;
    EXPECT_THROW(init_mlp(cfg, 3, 2), ConfigError);
    MlpConfig ok;
    ok.nodes = 4;
    ok.hidden_layers = 1;
    const auto m = init_mlp(ok, 3, 2);
    EXPECT_THROW(mlp_forward(m, std::vector<double>{1, 2}), DataError);
    const Matrix x = random_matrix(4, 3, 1);
    EXPECT_THROW(mlp_loss_and_gradients(m, x, std::vector<VarietyId>{0, 1, 2, 0}), DataError);
    MlpConfig explode = ok;
    explode.learning_rate = 1e300;
    explode.epochs = 50;
    Matrix big = x * 1e150;
    EXPECT_THROW(train_mlp(m, big, std::vector<VarietyId>{0, 1, 1, 0}, explode), NumericError);
}
