// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "grocat/ranking.hpp"
#include "grocat/vectorize.hpp"

namespace grocat {

struct GbtConfig {
    std::size_t rounds = 100;
    double learning_rate = 0.3;
    std::size_t max_depth = 6;
    double lambda = 1.0;            ///< L2 penalty on leaf weights
    double gamma = 0.0;             ///< penalty per leaf
    double min_child_weight = 1.0;  ///< minimum hessian sum in each child

    void validate() const;
};

struct TreeNode {
    int feature = -1;  ///< -1 for leaves
    double threshold = 0.0;
    int left = -1;   ///< taken when x[feature] < threshold
    int right = -1;
    double value = 0.0;     ///< leaf output added to the class score (already shrunk)
    double grad_sum = 0.0;  ///< G of the samples that reached this node when grown
    double hess_sum = 0.0;  ///< H of the same samples

    bool is_leaf() const noexcept { return feature < 0; }
};

class RegressionTree {
public:
    RegressionTree() = default;
    explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    double predict(std::span<const double> x) const { return nodes_[leaf_index(x)].value; }
    std::size_t leaf_index(std::span<const double> x) const;
    std::size_t leaf_count() const;
    std::size_t depth() const;
    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    std::vector<TreeNode>& nodes() noexcept { return nodes_; }

private:
    std::vector<TreeNode> nodes_;
};

/// ½[G_L²/(H_L+λ) + G_R²/(H_R+λ) − (G_L+G_R)²/(H_L+H_R+λ)] − γ
double split_gain(double grad_left, double hess_left, double grad_right, double hess_right, double lambda, double gamma);

/// −G/(H+λ); zero when H + λ is zero.
double leaf_weight(double grad, double hess, double lambda);

/// Feature columns sorted by value, computed once per training matrix.
struct SortedFeatures {
    std::vector<std::vector<std::uint32_t>> order;
    explicit SortedFeatures(const Matrix& x);
};

/// Grows one tree on per-sample gradients/hessians by exact greedy search.
/// Leaf values are `shrinkage` * leaf_weight.
RegressionTree fit_tree(const Matrix& x, const SortedFeatures& sorted, std::span<const double> grad,
                        std::span<const double> hess, const GbtConfig& cfg, double shrinkage);

struct GbtModel {
    std::size_t classes = 0;
    std::size_t features = 0;
    std::vector<double> base_score;                  ///< log class priors
    std::vector<std::vector<RegressionTree>> rounds;  ///< rounds[r][class]
    std::optional<VarietyId> constant_class;          ///< set when training saw one class only
    GbtConfig config;
};

/// Per-round training objective; entry 0 is the objective before any tree.
struct GbtTrace {
    std::vector<double> objective;
};

/// Softmax boosting: each round grows one tree per class on g = p − 1{y = c},
/// h = p(1 − p).
GbtModel fit_gbt(const Matrix& x, std::span<const VarietyId> y, std::size_t classes, const GbtConfig& cfg,
                 GbtTrace* trace = nullptr);

Vector gbt_raw_scores(const GbtModel& m, std::span<const double> x);
Vector gbt_probabilities(const GbtModel& m, std::span<const double> x);
RankedPrediction gbt_predict(const GbtModel& m, std::span<const double> x);

/// Sum of softmax cross-entropy over the rows plus γT + ½λΣw² over every tree.
double gbt_objective(const GbtModel& m, const Matrix& x, std::span<const VarietyId> y);

}  // namespace grocat
