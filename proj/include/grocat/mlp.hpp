// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "grocat/ranking.hpp"
#include "grocat/vectorize.hpp"

namespace grocat {

struct MlpConfig {
    std::size_t hidden_layers = 3;
    std::size_t nodes = 800;  ///< width of every hidden layer
    std::size_t epochs = 600;
    double learning_rate = 0.001;
    std::size_t batch_size = 32;
    std::uint64_t seed = 42;
    // Adam moments
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const;
};

struct DenseLayer {
    Eigen::MatrixXd weights;  ///< out x in
    Eigen::VectorXd bias;     ///< out
};

/// Affine + ReLU hidden layers, affine + softmax output.
struct MlpModel {
    std::vector<DenseLayer> layers;
    std::string activation = "relu";
    std::string optimizer = "adam";

    std::size_t input_dim() const { return static_cast<std::size_t>(layers.front().weights.cols()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(layers.back().weights.rows()); }
    std::vector<std::size_t> widths() const;
};

/// He-normal weights (variance 2 / fan_in), zero biases, seeded.
MlpModel init_mlp(std::span<const std::size_t> widths, std::uint64_t seed);
MlpModel init_mlp(const MlpConfig& cfg, std::size_t input_dim, std::size_t classes);

Vector mlp_forward(const MlpModel& m, std::span<const double> x);
/// Class probabilities, one row per input row.
Matrix mlp_forward_batch(const MlpModel& m, const Matrix& x);
RankedPrediction mlp_predict(const MlpModel& m, std::span<const double> x);

struct LossAndGradients {
    double loss = 0.0;                ///< mean cross-entropy over the batch
    std::vector<DenseLayer> grads;    ///< same shapes as the model layers
    Matrix output_delta;              ///< d loss / d output pre-activation (batch x V)
};

LossAndGradients mlp_loss_and_gradients(const MlpModel& m, const Matrix& x, std::span<const VarietyId> y);

struct MlpTrainResult {
    MlpModel model;
    std::vector<double> loss_trace;  ///< mean training loss of each epoch
};

/// Called after every epoch with the 1-based epoch number.
using EpochCallback = std::function<void(std::size_t epoch, const MlpModel& model)>;

/// Mini-batch Adam on mean cross-entropy; data order reshuffled every epoch.
MlpTrainResult train_mlp(MlpModel model, const Matrix& x, std::span<const VarietyId> y, const MlpConfig& cfg,
                         const EpochCallback& on_epoch = {});

}  // namespace grocat
