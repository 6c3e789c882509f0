// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/ranking.hpp"

#include <algorithm>
#include <utility>

namespace grocat {

RankedPrediction::RankedPrediction(std::vector<RankedEntry> entries) : entries_(std::move(entries)) {}

RankedPrediction RankedPrediction::from_scores(std::span<const double> scores) {
    std::vector<RankedEntry> entries;
    entries.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        entries.push_back({static_cast<VarietyId>(i), scores[i]});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RankedEntry& a, const RankedEntry& b) { return a.score > b.score; });
    return RankedPrediction(std::move(entries));
}

std::span<const RankedEntry> RankedPrediction::top(std::size_t k) const {
    return std::span<const RankedEntry>(entries_).first(std::min(k, entries_.size()));
}

}  // namespace grocat
