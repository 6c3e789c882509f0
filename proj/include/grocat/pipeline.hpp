// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "grocat/bm25.hpp"
#include "grocat/boosted.hpp"
#include "grocat/catalog.hpp"
#include "grocat/config.hpp"
#include "grocat/evaluate.hpp"
#include "grocat/mlp.hpp"
#include "grocat/neighbors.hpp"
#include "grocat/pca.hpp"
#include "grocat/textprep.hpp"

namespace grocat {

using ClassifierModel = std::variant<ScoreModel, KnnModel, FknnModel, GbtModel, MlpModel>;

/// A fitted text-to-ranking pipeline: preprocessing settings, vocabulary,
/// optional PCA and one classifier.
struct PipelineModel {
    VarietyIndex varieties;
    Vocabulary vocabulary;
    StopwordSet stopwords;
    PreprocessOptions preprocess;
    VocabScope vocab_scope = VocabScope::train;
    std::uint64_t split_seed = 0;
    std::optional<PcaModel> pca;  ///< absent for bm25
    ClassifierModel classifier;

    ClassifierKind kind() const noexcept { return static_cast<ClassifierKind>(classifier.index()); }
};

struct ProductPrediction {
    RankedPrediction ranking;
    /// None of the product's words is in the vocabulary; the ranking is then
    /// every variety with score 0 in id order.
    bool out_of_vocabulary = false;
};

StopwordSet load_stopwords(const RunConfig& cfg);

/// Preprocessed catalog shared by every model trained on it.
struct PreparedCatalog {
    std::vector<WordList> words;
    std::vector<VarietyId> labels;
    VarietyIndex varieties;
};

PreparedCatalog prepare_catalog(const Catalog& catalog, const StopwordSet& stopwords, const PreprocessOptions& opts);

/// Fits `kind` on the rows `train_rows`. With VocabScope::all the vocabulary
/// and PCA see every row of `data`; otherwise only the training rows.
/// `pca_components` is ignored for bm25.
PipelineModel fit_pipeline(const RunConfig& cfg, ClassifierKind kind, std::size_t pca_components,
                           const PreparedCatalog& data, std::span<const std::size_t> train_rows,
                           const StopwordSet& stopwords);

/// Fits the configured classifier on every catalog row.
PipelineModel train_model(const RunConfig& cfg, const Catalog& catalog);

ProductPrediction predict_words(const PipelineModel& model, const WordList& words);
ProductPrediction predict_product(const PipelineModel& model, const Product& product);
std::vector<ProductPrediction> predict_products(const PipelineModel& model, std::span<const Product> products);

/// Metrics of one trained model at Top_1, Top_2 and Top_3.
struct EvaluationColumn {
    std::size_t pca_components = 0;  ///< 0 for bm25
    std::array<Metrics, 3> metrics;
};

struct EvaluationTable {
    ClassifierKind classifier = ClassifierKind::bm25;
    std::vector<EvaluationColumn> columns;
};

struct EvaluationRun {
    RunConfig config;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::vector<EvaluationTable> tables;
};

/// Split, then train and score each requested classifier over the PCA sweep.
EvaluationRun run_evaluation(const RunConfig& cfg, const Catalog& catalog);

enum class TuneTarget { knn, fknn, mlp };

std::string_view tune_target_name(TuneTarget t);
TuneTarget parse_tune_target(std::string_view s);

struct TuneRun {
    RunConfig config;
    TuneTarget target = TuneTarget::knn;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::variant<KnnGrid, MlpGrid> grid;
};

/// Split, vocabulary and PCA (`pipeline.pca_components`), then the grid.
TuneRun run_tuning(const RunConfig& cfg, const Catalog& catalog, TuneTarget target);

}  // namespace grocat
