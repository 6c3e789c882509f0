// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "grocat/ranking.hpp"
#include "grocat/vectorize.hpp"

namespace grocat {

/// `modified` is the classifier: c(w, v) fixed to 1 and log((N + 1) / (vf + 1)).
/// `okapi` is the textbook formula with raw counts and log((N - df + .5) / (df + .5)),
/// kept as a reference for tests; it is not offered as a classifier.
enum class Bm25Variant { modified, okapi };

/// Variety-level statistics of a variety matrix. Read-only after fitting.
struct ScoreModel {
    struct Posting {
        std::uint32_t variety = 0;
        std::uint32_t count = 0;  ///< Y[variety][word] >= 1
    };

    double k = 1.2;
    double b = 0.75;
    std::size_t varieties = 0;             ///< N
    std::vector<std::uint64_t> lengths;    ///< |v| per variety (total word count)
    double average_length = 0.0;          ///< avvl
    std::vector<std::vector<Posting>> postings;  ///< per vocabulary word, ascending variety

    std::size_t vocabulary_size() const noexcept { return postings.size(); }
    /// Number of varieties containing word `w`.
    std::size_t variety_frequency(std::size_t w) const { return postings.at(w).size(); }
};

/// Throws DataError when Y has no rows or no nonzero entry.
ScoreModel fit_score_model(const VarietyMatrix& y, double k = 1.2, double b = 0.75);

double score_variety(const ScoreModel& m, const TermSet& query, VarietyId variety,
                     Bm25Variant variant = Bm25Variant::modified);

/// Scores of every variety for `query`; words outside the vocabulary contribute nothing.
std::vector<double> score_all(const ScoreModel& m, const TermSet& query, Bm25Variant variant = Bm25Variant::modified);

/// All N varieties, descending score, ties by ascending id.
RankedPrediction rank_varieties(const ScoreModel& m, const TermSet& query);

}  // namespace grocat
