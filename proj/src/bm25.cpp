// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/bm25.hpp"

#include <cmath>
#include <string>

#include "grocat/errors.hpp"

namespace grocat {

namespace {

double length_norm(const ScoreModel& m, std::size_t variety) {
    return m.k * (1.0 - m.b + m.b * static_cast<double>(m.lengths[variety]) / m.average_length);
}

double term_weight(const ScoreModel& m, std::size_t word, const ScoreModel::Posting& p, Bm25Variant variant) {
    const double n = static_cast<double>(m.varieties);
    const double df = static_cast<double>(m.variety_frequency(word));
    if (variant == Bm25Variant::modified) {
        return (m.k + 1.0) / (1.0 + length_norm(m, p.variety)) * std::log((n + 1.0) / (df + 1.0));
    }
    const double c = static_cast<double>(p.count);
    return (m.k + 1.0) * c / (c + length_norm(m, p.variety)) * std::log((n - df + 0.5) / (df + 0.5));
}

}  // namespace

ScoreModel fit_score_model(const VarietyMatrix& y, double k, double b) {
    if (y.rows() == 0 || y.cols() == 0) throw DataError("score model: variety matrix is empty");
    ScoreModel m;
    m.k = k;
    m.b = b;
    m.varieties = y.rows();
    m.lengths.resize(y.rows());
    for (std::size_t i = 0; i < y.rows(); ++i) m.lengths[i] = y.length(i);
    m.average_length = y.average_length();
    if (m.average_length <= 0.0) throw DataError("score model: variety matrix has no words");

    m.postings.resize(y.cols());
    for (std::size_t i = 0; i < y.rows(); ++i) {
        for (std::size_t j = 0; j < y.cols(); ++j) {
            if (const auto c = y.at(i, j); c > 0) m.postings[j].push_back({static_cast<std::uint32_t>(i), c});
        }
    }
    return m;
}

double score_variety(const ScoreModel& m, const TermSet& query, VarietyId variety, Bm25Variant variant) {
    if (variety >= m.varieties) {
        throw DataError("score_variety: unknown variety id " + std::to_string(variety));
    }
    double score = 0.0;
    for (auto w : query) {
        if (w >= m.vocabulary_size()) continue;
        for (const auto& p : m.postings[w]) {
            if (p.variety == variety) {
                score += term_weight(m, w, p, variant);
                break;
            }
        }
    }
    return score;
}

std::vector<double> score_all(const ScoreModel& m, const TermSet& query, Bm25Variant variant) {
    std::vector<double> scores(m.varieties, 0.0);
    for (auto w : query) {
        if (w >= m.vocabulary_size()) continue;
        for (const auto& p : m.postings[w]) scores[p.variety] += term_weight(m, w, p, variant);
    }
    return scores;
}

RankedPrediction rank_varieties(const ScoreModel& m, const TermSet& query) {
    return RankedPrediction::from_scores(score_all(m, query));
}

}  // namespace grocat
