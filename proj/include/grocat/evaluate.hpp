// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "grocat/catalog.hpp"
#include "grocat/mlp.hpp"
#include "grocat/neighbors.hpp"
#include "grocat/ranking.hpp"

namespace grocat {

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded shuffle of [0, rows); the first round(ratio * rows) go to train.
/// Each partition keeps ascending row order.
SplitIndices split_dataset(std::size_t rows, double ratio, std::uint64_t seed);

/// True when `truth` is among the first min(k, size) entries.
bool topk_hit(const RankedPrediction& pred, VarietyId truth, std::size_t k);

enum class Averaging { macro, micro };

/// How a Top-k prediction becomes a single label for the confusion matrix.
/// `collapse`: the truth on a hit, C1 on a miss. `top1`: always C1.
enum class TopkRule { collapse, top1 };

std::string_view averaging_name(Averaging a);
Averaging parse_averaging(std::string_view s);
std::string_view topk_rule_name(TopkRule r);
TopkRule parse_topk_rule(std::string_view s);

/// One-vs-rest counts per class.
struct ConfusionCounts {
    std::vector<std::size_t> tp, tn, fp, fn;
    std::size_t samples = 0;

    std::size_t classes() const noexcept { return tp.size(); }
};

/// `predicted[i]` may be kNoPrediction (counts as a miss for the truth only).
inline constexpr VarietyId kNoPrediction = static_cast<VarietyId>(-1);
ConfusionCounts confusion_counts(std::span<const VarietyId> predicted, std::span<const VarietyId> truths,
                                 std::size_t classes);

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    Averaging mode = Averaging::macro;
    std::size_t k = 1;
};

/// Accuracy is the Top-k hit rate. Precision, recall and F1 come from the
/// confusion matrix of the effective predictions; macro averages over the
/// classes present in `truths`, micro pools the counts of all classes.
Metrics evaluate_classifier(std::span<const RankedPrediction> preds, std::span<const VarietyId> truths, std::size_t k,
                            Averaging mode, TopkRule rule = TopkRule::collapse);

/// Metrics straight from counts; used by `evaluate_classifier`.
Metrics metrics_from_counts(const ConfusionCounts& counts, std::span<const VarietyId> truths, std::size_t hits,
                            Averaging mode);

// Hyperparameter grids --------------------------------------------------------

enum class NeighborVariant { knn, fknn };

struct KnnGridCell {
    std::size_t k = 1;
    MetricKind metric = MetricKind::euclidean;
    std::array<double, 3> accuracy{};  ///< Top_1, Top_2, Top_3
};

struct KnnGrid {
    std::vector<KnnGridCell> cells;  ///< sorted by (k, metric order of kAllMetrics)
    std::array<std::size_t, 3> best{};  ///< index of the first maximal cell per Top-k
};

struct KnnTuneOptions {
    std::vector<std::size_t> ks = {1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29};
    std::vector<MetricKind> metrics = {kAllMetrics.begin(), kAllMetrics.end()};
    FknnOptions fknn;
};

KnnGrid tune_knn(const Matrix& train, std::span<const VarietyId> train_labels, const Matrix& test,
                 std::span<const VarietyId> test_labels, std::size_t varieties, NeighborVariant variant,
                 const KnnTuneOptions& opts = {});

struct MlpGridCell {
    std::size_t nodes = 0;
    std::size_t epochs = 0;
    std::array<double, 3> accuracy{};
};

struct MlpGrid {
    std::vector<MlpGridCell> cells;  ///< sorted by (nodes, epochs)
    std::array<std::size_t, 3> best{};
};

struct MlpTuneOptions {
    std::vector<std::size_t> nodes = {300, 400, 500, 600, 700, 800};
    std::vector<std::size_t> epochs = {100, 200, 300, 400, 500, 600, 700, 800};
    MlpConfig base;  ///< hidden_layers, learning_rate, batch size and seed; nodes/epochs are overridden
};

/// One training run per node count; epoch cells are snapshots of that run,
/// identical to training from scratch for that many epochs.
MlpGrid tune_mlp(const Matrix& train, std::span<const VarietyId> train_labels, const Matrix& test,
                 std::span<const VarietyId> test_labels, std::size_t varieties, const MlpTuneOptions& opts = {});

// Synthetic catalogs -----------------------------------------------------------

struct SynthConfig {
    std::size_t varieties = 20;
    std::size_t words_per_signature = 8;
    std::size_t noise_vocab = 200;
    std::size_t products_per_variety = 100;
    /// Fraction of each variety's signature borrowed from the next variety's.
    double overlap = 0.0;
    std::uint64_t seed = 7;
    std::size_t signature_words_per_product = 3;
    std::size_t noise_words_per_product = 4;

    void validate() const;
};

/// Varieties with their own signature words; products mix signature and noise words.
Catalog synth_catalog(const SynthConfig& cfg);

/// The signature words of every variety, as generated by `synth_catalog`.
std::vector<std::vector<std::string>> synth_signatures(const SynthConfig& cfg);

}  // namespace grocat
