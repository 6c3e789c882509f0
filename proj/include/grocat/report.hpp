// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "grocat/pipeline.hpp"

namespace grocat {

/// Flat "section.key" -> value object of every configuration key.
nlohmann::ordered_json config_json(const RunConfig& cfg);

nlohmann::ordered_json training_json(const RunConfig& cfg, const PipelineModel& model, std::size_t products);

/// One object per product: identifier, warning flag and the Top_3 entries.
nlohmann::ordered_json predictions_json(const PipelineModel& model, std::span<const Product> products,
                                        std::span<const ProductPrediction> preds);
std::string predictions_table(const PipelineModel& model, std::span<const Product> products,
                              std::span<const ProductPrediction> preds);

nlohmann::ordered_json evaluation_json(const EvaluationRun& run);
/// One block per classifier: PCA sizes across, Accuracy/Precision/Recall/F1
/// down within each Top_k group.
std::string evaluation_table(const EvaluationRun& run);

nlohmann::ordered_json tuning_json(const TuneRun& run);
/// Every grid cell, then the best cell per Top_k.
std::string tuning_table(const TuneRun& run);

}  // namespace grocat
