// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "grocat/errors.hpp"

namespace grocat {

namespace {

using ColMatrix = Eigen::MatrixXd;

void softmax_rows(ColMatrix& z) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double top = z.row(i).maxCoeff();
        z.row(i) = (z.row(i).array() - top).exp();
        z.row(i) /= z.row(i).sum();
    }
}

// Pre-activations and activations of every layer for one batch.
struct ForwardPass {
    std::vector<ColMatrix> inputs;  // inputs[l] feeds layer l
    std::vector<ColMatrix> pre;     // pre-activation of layer l
    ColMatrix probs;
};

ForwardPass forward(const MlpModel& m, const ColMatrix& x) {
    ForwardPass f;
    f.inputs.reserve(m.layers.size());
    f.pre.reserve(m.layers.size());
    ColMatrix a = x;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const auto& layer = m.layers[l];
        ColMatrix z = a * layer.weights.transpose();
        z.rowwise() += layer.bias.transpose();
        f.inputs.push_back(std::move(a));
        f.pre.push_back(z);
        if (l + 1 < m.layers.size()) {
            a = z.cwiseMax(0.0);
        } else {
            softmax_rows(z);
            f.probs = std::move(z);
        }
    }
    return f;
}

void check_input(const MlpModel& m, Eigen::Index cols) {
    if (m.layers.empty()) throw DataError("mlp: model has no layers");
    if (static_cast<std::size_t>(cols) != m.input_dim()) {
        throw DataError("mlp: expected input dimension " + std::to_string(m.input_dim()) + ", got " +
                        std::to_string(cols));
    }
}

}  // namespace

void MlpConfig::validate() const {
    if (hidden_layers < 1) throw ConfigError("mlp: hidden_layers must be >= 1");
    if (nodes < 1) throw ConfigError("mlp: nodes must be >= 1");
    if (epochs < 1) throw ConfigError("mlp: epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("mlp: learning_rate must be > 0");
    if (batch_size < 1) throw ConfigError("mlp: batch_size must be >= 1");
}

std::vector<std::size_t> MlpModel::widths() const {
    std::vector<std::size_t> w;
    if (layers.empty()) return w;
    w.push_back(input_dim());
    for (const auto& l : layers) w.push_back(static_cast<std::size_t>(l.weights.rows()));
    return w;
}

MlpModel init_mlp(std::span<const std::size_t> widths, std::uint64_t seed) {
    if (widths.size() < 2) throw ConfigError("mlp: need at least input and output widths");
    for (auto w : widths) {
        if (w < 1) throw ConfigError("mlp: layer widths must be >= 1");
    }
    std::mt19937_64 rng(seed);
    MlpModel m;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const auto in = static_cast<Eigen::Index>(widths[l]);
        const auto out = static_cast<Eigen::Index>(widths[l + 1]);
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(in)));
        DenseLayer layer;
        layer.weights.resize(out, in);
        for (Eigen::Index r = 0; r < out; ++r) {
            for (Eigen::Index c = 0; c < in; ++c) layer.weights(r, c) = dist(rng);
        }
        layer.bias = Eigen::VectorXd::Zero(out);
        m.layers.push_back(std::move(layer));
    }
    return m;
}

MlpModel init_mlp(const MlpConfig& cfg, std::size_t input_dim, std::size_t classes) {
    cfg.validate();
    std::vector<std::size_t> widths{input_dim};
    for (std::size_t i = 0; i < cfg.hidden_layers; ++i) widths.push_back(cfg.nodes);
    widths.push_back(classes);
    return init_mlp(widths, cfg.seed);
}

Matrix mlp_forward_batch(const MlpModel& m, const Matrix& x) {
    check_input(m, x.cols());
    return forward(m, ColMatrix(x)).probs;
}

Vector mlp_forward(const MlpModel& m, std::span<const double> x) {
    check_input(m, static_cast<Eigen::Index>(x.size()));
    ColMatrix row = Eigen::Map<const Eigen::RowVectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    return forward(m, row).probs.row(0).transpose();
}

RankedPrediction mlp_predict(const MlpModel& m, std::span<const double> x) {
    const Vector p = mlp_forward(m, x);
    return RankedPrediction::from_scores(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

LossAndGradients mlp_loss_and_gradients(const MlpModel& m, const Matrix& x, std::span<const VarietyId> y) {
    check_input(m, x.cols());
    const auto batch = x.rows();
    if (batch == 0) throw DataError("mlp: empty batch");
    if (static_cast<std::size_t>(batch) != y.size()) throw DataError("mlp: label count does not match batch");

    ForwardPass f = forward(m, ColMatrix(x));
    LossAndGradients out;
    const auto classes = static_cast<Eigen::Index>(m.output_dim());
    double loss = 0.0;
    ColMatrix delta = f.probs;
    for (Eigen::Index i = 0; i < batch; ++i) {
        const auto label = static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)]);
        if (label >= classes) throw DataError("mlp: label out of range");
        loss -= std::log(std::max(f.probs(i, label), std::numeric_limits<double>::min()));
        delta(i, label) -= 1.0;
    }
    const double scale = 1.0 / static_cast<double>(batch);
    out.loss = loss * scale;
    delta *= scale;
    out.output_delta = delta;

    out.grads.resize(m.layers.size());
    for (std::size_t l = m.layers.size(); l-- > 0;) {
        out.grads[l].weights = delta.transpose() * f.inputs[l];
        out.grads[l].bias = delta.colwise().sum().transpose();
        if (l > 0) {
            ColMatrix back = delta * m.layers[l].weights;
            delta = back.cwiseProduct((f.pre[l - 1].array() > 0.0).cast<double>().matrix());
        }
    }
    return out;
}

MlpTrainResult train_mlp(MlpModel model, const Matrix& x, std::span<const VarietyId> y, const MlpConfig& cfg,
                         const EpochCallback& on_epoch) {
    cfg.validate();
    check_input(model, x.cols());
    const auto m = static_cast<std::size_t>(x.rows());
    if (m == 0) throw DataError("mlp: empty training set");
    if (y.size() != m) throw DataError("mlp: label count does not match training rows");
    for (auto label : y) {
        if (label >= model.output_dim()) throw DataError("mlp: label out of range");
    }

    std::vector<DenseLayer> first(model.layers.size()), second(model.layers.size());
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const auto& layer = model.layers[l];
        first[l] = {Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()), Eigen::VectorXd::Zero(layer.bias.size())};
        second[l] = first[l];
    }

    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);

    MlpTrainResult result;
    result.loss_trace.reserve(cfg.epochs);
    std::size_t step = 0;
    Matrix batch_x;
    std::vector<VarietyId> batch_y;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < m; start += cfg.batch_size) {
            const std::size_t end = std::min(m, start + cfg.batch_size);
            batch_x.resize(static_cast<Eigen::Index>(end - start), x.cols());
            batch_y.resize(end - start);
            for (std::size_t i = start; i < end; ++i) {
                batch_x.row(static_cast<Eigen::Index>(i - start)) = x.row(static_cast<Eigen::Index>(order[i]));
                batch_y[i - start] = y[order[i]];
            }
            auto lg = mlp_loss_and_gradients(model, batch_x, batch_y);
            if (!std::isfinite(lg.loss)) {
                throw NumericError("mlp: non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                                   std::to_string(step + 1));
            }
            epoch_loss += lg.loss * static_cast<double>(end - start);

            ++step;
            const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                auto update = [&](auto& param, auto& m1, auto& m2, const auto& g) {
                    m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * g;
                    m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * g.cwiseProduct(g);
                    param.array() -= cfg.learning_rate * (m1.array() / c1) / ((m2.array() / c2).sqrt() + cfg.epsilon);
                };
                update(model.layers[l].weights, first[l].weights, second[l].weights, lg.grads[l].weights);
                update(model.layers[l].bias, first[l].bias, second[l].bias, lg.grads[l].bias);
            }
        }
        result.loss_trace.push_back(epoch_loss / static_cast<double>(m));
        if (on_epoch) on_epoch(epoch, model);
    }
    result.model = std::move(model);
    return result;
}

}  // namespace grocat
