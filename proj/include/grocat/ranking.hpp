// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace grocat {

using VarietyId = std::uint32_t;

struct RankedEntry {
    VarietyId variety = 0;
    double score = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Varieties ordered best-first. Every classifier returns one of these.
///
/// Scores are non-increasing along the list. The order itself is the
/// authority: classifiers with their own tie rules (KNN prefers the variety
/// owning the closest neighbor) produce the entries directly.
class RankedPrediction {
public:
    RankedPrediction() = default;
    explicit RankedPrediction(std::vector<RankedEntry> entries);

    /// One entry per variety, descending score, ties by ascending id.
    static RankedPrediction from_scores(std::span<const double> scores);

    const std::vector<RankedEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const RankedEntry& operator[](std::size_t i) const { return entries_[i]; }

    /// The Top_k set {C1..Ck}; shorter when fewer entries exist.
    std::span<const RankedEntry> top(std::size_t k) const;

    friend bool operator==(const RankedPrediction&, const RankedPrediction&) = default;

private:
    std::vector<RankedEntry> entries_;
};

}  // namespace grocat
