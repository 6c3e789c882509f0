// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "grocat/boosted.hpp"
#include "grocat/catalog.hpp"
#include "grocat/evaluate.hpp"
#include "grocat/mlp.hpp"
#include "grocat/neighbors.hpp"

namespace grocat {

enum class ClassifierKind { bm25, knn, fknn, gbt, mlp };

inline constexpr std::array<ClassifierKind, 5> kAllClassifiers = {
    ClassifierKind::bm25, ClassifierKind::knn, ClassifierKind::fknn, ClassifierKind::gbt, ClassifierKind::mlp};

std::string_view classifier_name(ClassifierKind kind);
ClassifierKind parse_classifier(std::string_view name);

/// `train` builds the vocabulary (and fits PCA) on training rows only;
/// `all` uses every catalog row, as a whole-dataset matrix would.
enum class VocabScope { train, all };

std::string_view vocab_scope_name(VocabScope s);
VocabScope parse_vocab_scope(std::string_view s);

/// Everything a command needs besides its input files. Loaded from an INI
/// file with one section per concern and overridable key by key.
struct RunConfig {
    // [catalog]
    CatalogFormat format;

    // [text]
    std::vector<std::filesystem::path> stopword_files = default_stopword_files();
    bool fold_accents = false;

    // [pipeline]
    ClassifierKind classifier = ClassifierKind::bm25;
    std::size_t pca_components = 400;
    VocabScope vocab_scope = VocabScope::train;
    double split_ratio = 0.9;
    std::uint64_t split_seed = 1;

    // [bm25]
    double bm25_k = 1.2;
    double bm25_b = 0.75;

    // [knn]
    std::size_t knn_k = 5;
    MetricKind knn_metric = MetricKind::euclidean;

    // [fknn]
    std::size_t fknn_k = 13;
    MetricKind fknn_metric = MetricKind::spearman;
    FknnOptions fknn;

    // [gbt]
    GbtConfig gbt;

    // [mlp]
    MlpConfig mlp;

    // [evaluate]
    std::vector<ClassifierKind> evaluate_classifiers;  ///< empty means just `classifier`
    std::vector<std::size_t> pca_sweep = {400, 500, 600, 700, 800};
    Averaging averaging = Averaging::macro;
    TopkRule topk_rule = TopkRule::collapse;

    // [tune]
    KnnTuneOptions tune_knn;
    MlpTuneOptions tune_mlp;

    static std::vector<std::filesystem::path> default_stopword_files();

    /// Throws ConfigError on any out-of-range value.
    void validate() const;
};

/// Reads `section.key = value` pairs; unknown sections or keys are errors.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Applies one `section.key=value` assignment.
void apply_override(RunConfig& cfg, std::string_view assignment);
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// Every key with its effective value, in a fixed order, as INI text that
/// `parse_config` reads back to the same configuration.
std::string to_ini(const RunConfig& cfg);

/// The same keys as ordered (key, value) pairs.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);

}  // namespace grocat
