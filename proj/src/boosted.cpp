// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/boosted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "grocat/errors.hpp"

namespace grocat {

namespace {

constexpr double kMinPrior = 1e-6;

Vector softmax(const Vector& z) {
    const double top = z.maxCoeff();
    Vector e = (z.array() - top).exp();
    return e / e.sum();
}

double structure_score(double g, double h, double lambda) {
    const double denom = h + lambda;
    return denom > 0.0 ? g * g / denom : 0.0;
}

struct SplitCandidate {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

}  // namespace

void GbtConfig::validate() const {
    if (rounds < 1) throw ConfigError("gbt: rounds must be >= 1");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw ConfigError("gbt: learning_rate must be in (0, 1]");
    if (max_depth < 1) throw ConfigError("gbt: max_depth must be >= 1");
    if (lambda < 0.0) throw ConfigError("gbt: lambda must be >= 0");
    if (gamma < 0.0) throw ConfigError("gbt: gamma must be >= 0");
    if (min_child_weight < 0.0) throw ConfigError("gbt: min_child_weight must be >= 0");
}

std::size_t RegressionTree::leaf_index(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        const auto& n = nodes_[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
    }
    return i;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t RegressionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::vector<std::size_t> level(nodes_.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (!nodes_[i].is_leaf()) {
            level[static_cast<std::size_t>(nodes_[i].left)] = level[i] + 1;
            level[static_cast<std::size_t>(nodes_[i].right)] = level[i] + 1;
        }
    }
    return deepest;
}

double split_gain(double grad_left, double hess_left, double grad_right, double hess_right, double lambda, double gamma) {
    return 0.5 * (structure_score(grad_left, hess_left, lambda) + structure_score(grad_right, hess_right, lambda) -
                  structure_score(grad_left + grad_right, hess_left + hess_right, lambda)) -
           gamma;
}

double leaf_weight(double grad, double hess, double lambda) {
    const double denom = hess + lambda;
    return denom > 0.0 ? -grad / denom : 0.0;
}

SortedFeatures::SortedFeatures(const Matrix& x) : order(static_cast<std::size_t>(x.cols())) {
    const auto m = static_cast<std::uint32_t>(x.rows());
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
        auto& idx = order[static_cast<std::size_t>(f)];
        idx.resize(m);
        std::iota(idx.begin(), idx.end(), 0u);
        std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) { return x(a, f) < x(b, f); });
    }
}

RegressionTree fit_tree(const Matrix& x, const SortedFeatures& sorted, std::span<const double> grad,
                        std::span<const double> hess, const GbtConfig& cfg, double shrinkage) {
    const std::size_t m = static_cast<std::size_t>(x.rows());
    std::vector<TreeNode> nodes(1);
    nodes[0].grad_sum = std::accumulate(grad.begin(), grad.end(), 0.0);
    nodes[0].hess_sum = std::accumulate(hess.begin(), hess.end(), 0.0);

    // Node currently holding each sample; -1 once its node is a finished leaf.
    std::vector<int> node_of(m, 0);
    std::vector<int> frontier = {0};

    for (std::size_t depth = 0; !frontier.empty(); ++depth) {
        std::vector<SplitCandidate> best(nodes.size());
        if (depth < cfg.max_depth) {
            struct ScanState {
                double gl = 0.0, hl = 0.0, last = 0.0;
                bool started = false;
            };
            std::vector<ScanState> state(nodes.size());
            for (std::size_t f = 0; f < sorted.order.size(); ++f) {
                for (int id : frontier) state[static_cast<std::size_t>(id)] = ScanState{};
                for (std::uint32_t i : sorted.order[f]) {
                    const int id = node_of[i];
                    if (id < 0) continue;
                    auto& s = state[static_cast<std::size_t>(id)];
                    const double v = x(i, static_cast<Eigen::Index>(f));
                    const auto& node = nodes[static_cast<std::size_t>(id)];
                    if (s.started && v > s.last) {
                        const double hr = node.hess_sum - s.hl;
                        if (s.hl >= cfg.min_child_weight && hr >= cfg.min_child_weight) {
                            const double gain =
                                split_gain(s.gl, s.hl, node.grad_sum - s.gl, hr, cfg.lambda, cfg.gamma);
                            auto& b = best[static_cast<std::size_t>(id)];
                            if (gain > b.gain) {
                                double thr = s.last + (v - s.last) / 2.0;
                                if (!(s.last < thr)) thr = v;
                                b = {gain, static_cast<int>(f), thr};
                            }
                        }
                    }
                    s.gl += grad[i];
                    s.hl += hess[i];
                    s.last = v;
                    s.started = true;
                }
            }
        }

        std::vector<int> next;
        for (int id : frontier) {
            const auto b = best[static_cast<std::size_t>(id)];
            if (b.feature < 0) {
                auto& leaf = nodes[static_cast<std::size_t>(id)];
                leaf.value = shrinkage * leaf_weight(leaf.grad_sum, leaf.hess_sum, cfg.lambda);
                continue;
            }
            const int left = static_cast<int>(nodes.size());
            nodes.emplace_back();
            nodes.emplace_back();
            auto& node = nodes[static_cast<std::size_t>(id)];
            node.feature = b.feature;
            node.threshold = b.threshold;
            node.left = left;
            node.right = left + 1;
            next.push_back(left);
            next.push_back(left + 1);
        }
        for (std::size_t i = 0; i < m; ++i) {
            const int id = node_of[i];
            if (id < 0) continue;
            const auto& node = nodes[static_cast<std::size_t>(id)];
            if (node.is_leaf()) {
                node_of[i] = -1;
                continue;
            }
            const int child = x(static_cast<Eigen::Index>(i), node.feature) < node.threshold ? node.left : node.right;
            node_of[i] = child;
            nodes[static_cast<std::size_t>(child)].grad_sum += grad[i];
            nodes[static_cast<std::size_t>(child)].hess_sum += hess[i];
        }
        frontier = std::move(next);
    }
    return RegressionTree(std::move(nodes));
}

GbtModel fit_gbt(const Matrix& x, std::span<const VarietyId> y, std::size_t classes, const GbtConfig& cfg,
                 GbtTrace* trace) {
    cfg.validate();
    const auto m = static_cast<std::size_t>(x.rows());
    if (m == 0) throw DataError("gbt: empty training set");
    if (y.size() != m) throw DataError("gbt: label count does not match training rows");
    if (classes < 1) throw DataError("gbt: no classes");
    if (!x.allFinite()) throw NumericError("gbt: training data contains non-finite values");

    GbtModel model;
    model.classes = classes;
    model.features = static_cast<std::size_t>(x.cols());
    model.config = cfg;

    std::vector<std::size_t> counts(classes, 0);
    for (auto label : y) {
        if (label >= classes) throw DataError("gbt: label out of range");
        ++counts[label];
    }
    const auto present = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
    model.base_score.resize(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        const double prior = std::max(static_cast<double>(counts[c]) / static_cast<double>(m), kMinPrior);
        model.base_score[c] = std::log(prior);
    }
    if (present == 1) {
        model.constant_class = y[0];
        if (trace) trace->objective = {gbt_objective(model, x, y)};
        return model;
    }

    const SortedFeatures sorted(x);
    Matrix scores(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(classes));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t c = 0; c < classes; ++c) scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = model.base_score[c];
    }
    if (trace) trace->objective = {gbt_objective(model, x, y)};

    std::vector<double> grad(m), hess(m);
    Matrix probs(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(classes));
    for (std::size_t r = 0; r < cfg.rounds; ++r) {
        for (std::size_t i = 0; i < m; ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            probs.row(row) = softmax(scores.row(row).transpose()).transpose();
        }
        std::vector<RegressionTree> round;
        round.reserve(classes);
        for (std::size_t c = 0; c < classes; ++c) {
            for (std::size_t i = 0; i < m; ++i) {
                const double p = probs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
                grad[i] = p - (y[i] == c ? 1.0 : 0.0);
                hess[i] = p * (1.0 - p);
            }
            round.push_back(fit_tree(x, sorted, grad, hess, cfg, cfg.learning_rate));
        }
        for (std::size_t i = 0; i < m; ++i) {
            const auto xi = std::span<const double>(x.row(static_cast<Eigen::Index>(i)).data(), model.features);
            for (std::size_t c = 0; c < classes; ++c) {
                scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) += round[c].predict(xi);
            }
        }
        model.rounds.push_back(std::move(round));
        if (!scores.allFinite()) throw NumericError("gbt: non-finite scores after round " + std::to_string(r + 1));
        if (trace) trace->objective.push_back(gbt_objective(model, x, y));
    }
    return model;
}

Vector gbt_raw_scores(const GbtModel& m, std::span<const double> x) {
    if (x.size() != m.features) {
        throw DataError("gbt: expected " + std::to_string(m.features) + " features, got " + std::to_string(x.size()));
    }
    Vector z = Eigen::Map<const Vector>(m.base_score.data(), static_cast<Eigen::Index>(m.classes));
    for (const auto& round : m.rounds) {
        for (std::size_t c = 0; c < m.classes; ++c) z(static_cast<Eigen::Index>(c)) += round[c].predict(x);
    }
    return z;
}

Vector gbt_probabilities(const GbtModel& m, std::span<const double> x) {
    if (m.constant_class) {
        if (x.size() != m.features) throw DataError("gbt: feature dimension mismatch");
        Vector p = Vector::Zero(static_cast<Eigen::Index>(m.classes));
        p(*m.constant_class) = 1.0;
        return p;
    }
    return softmax(gbt_raw_scores(m, x));
}

RankedPrediction gbt_predict(const GbtModel& m, std::span<const double> x) {
    const Vector p = gbt_probabilities(m, x);
    return RankedPrediction::from_scores(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

double gbt_objective(const GbtModel& m, const Matrix& x, std::span<const VarietyId> y) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto xi = std::span<const double>(x.row(i).data(), static_cast<std::size_t>(x.cols()));
        if (m.constant_class) {
            loss += y[static_cast<std::size_t>(i)] == *m.constant_class ? 0.0 : std::numeric_limits<double>::infinity();
            continue;
        }
        const Vector z = gbt_raw_scores(m, xi);
        const double top = z.maxCoeff();
        const double log_norm = top + std::log((z.array() - top).exp().sum());
        loss += log_norm - z(y[static_cast<std::size_t>(i)]);
    }
    double penalty = 0.0;
    for (const auto& round : m.rounds) {
        for (const auto& tree : round) {
            for (const auto& node : tree.nodes()) {
                if (node.is_leaf()) penalty += m.config.gamma + 0.5 * m.config.lambda * node.value * node.value;
            }
        }
    }
    return loss + penalty;
}

}  // namespace grocat
