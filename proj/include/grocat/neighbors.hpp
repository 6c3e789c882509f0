// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "grocat/ranking.hpp"
#include "grocat/vectorize.hpp"

namespace grocat {

enum class MetricKind { cityblock, cosine, correlation, euclidean, seuclidean, jaccard, hamming, chebychev, spearman };

inline constexpr std::array<MetricKind, 9> kAllMetrics = {
    MetricKind::cityblock, MetricKind::cosine,  MetricKind::correlation,
    MetricKind::euclidean, MetricKind::seuclidean, MetricKind::jaccard,
    MetricKind::hamming,   MetricKind::chebychev, MetricKind::spearman,
};

std::string_view metric_name(MetricKind kind);
/// Accepts exactly the names returned by `metric_name`; throws ConfigError otherwise.
MetricKind parse_metric(std::string_view name);

/// A distance kind plus whatever it learned from training data. Only
/// seuclidean learns anything: 1/s^2 per dimension (0 where s = 0), with s
/// the sample standard deviation of the training column.
struct DistanceMetric {
    MetricKind kind = MetricKind::euclidean;
    std::vector<double> inverse_variance;
};

DistanceMetric make_metric(MetricKind kind, const Matrix& train);

/// Distances follow the textbook forms with these conventions:
/// cosine and correlation are 1 - similarity, spearman is 1 - rho with rho the
/// Pearson correlation of average ranks, jaccard is 1 - sum(min)/sum(max)
/// taken over positive and negative parts separately, hamming is the fraction
/// of differing coordinates. A zero vector (cosine) or a constant vector
/// (correlation, spearman) gives distance 1.
double distance(std::span<const double> a, std::span<const double> b, const DistanceMetric& metric);

/// Average (fractional) ranks, 1-based.
std::vector<double> fractional_ranks(std::span<const double> v);

struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;
};

/// Exact-scan neighbor search over a fixed training matrix.
class NeighborIndex {
public:
    NeighborIndex() = default;
    NeighborIndex(Matrix train, DistanceMetric metric);

    /// The `k` rows closest to `q`, ordered by (distance, row index).
    /// `exclude` removes one row (the query itself during membership init).
    std::vector<Neighbor> nearest(std::span<const double> q, std::size_t k,
                                  std::optional<std::size_t> exclude = std::nullopt) const;

    const Matrix& data() const noexcept { return train_; }
    const DistanceMetric& metric() const noexcept { return metric_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(train_.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(train_.cols()); }

private:
    Matrix train_;
    Matrix prepared_;  // spearman: rank-transformed rows; otherwise empty
    DistanceMetric metric_;
};

struct KnnModel {
    NeighborIndex index;
    std::vector<VarietyId> labels;
    std::size_t varieties = 0;
    std::size_t k = 1;
};

KnnModel fit_knn(Matrix train, std::vector<VarietyId> labels, std::size_t varieties, std::size_t k, MetricKind kind);

/// Majority vote over `neighbors` (already ordered). Ties in vote count go to
/// the variety owning the closer neighbor. Score = votes / neighbors.size().
RankedPrediction rank_by_votes(std::span<const Neighbor> neighbors, std::span<const VarietyId> labels);

RankedPrediction knn_predict(const KnnModel& m, std::span<const double> q);

enum class MembershipInit { keller, crisp };

/// Training-set class memberships (m x V, rows sum to 1). Keller init uses
/// each sample's `init_k` nearest other samples.
Matrix fknn_init_memberships(const NeighborIndex& index, std::span<const VarietyId> labels, std::size_t varieties,
                             std::size_t init_k, MembershipInit init);

/// Same, from precomputed neighbor lists (self excluded, at least `init_k` long).
Matrix fknn_init_memberships(std::span<const std::vector<Neighbor>> neighbor_lists, std::span<const VarietyId> labels,
                             std::size_t varieties, std::size_t init_k, MembershipInit init);

struct FknnOptions {
    double fuzzifier = 2.0;
    std::size_t init_k = 0;  ///< 0 means "same as k"
    MembershipInit init = MembershipInit::keller;
};

struct FknnModel {
    KnnModel knn;
    Matrix memberships;
    double fuzzifier = 2.0;
    std::size_t init_k = 1;
    MembershipInit init = MembershipInit::keller;
};

FknnModel fit_fknn(Matrix train, std::vector<VarietyId> labels, std::size_t varieties, std::size_t k, MetricKind kind,
                   const FknnOptions& opts = {});

/// Inverse-distance weighted membership vote, weights 1/d^(2/(fuzzifier-1)).
/// A neighbor at distance 0 hands over its membership row unchanged.
Vector fuzzy_vote(std::span<const Neighbor> neighbors, const Matrix& memberships, double fuzzifier);

/// Class scores over all varieties (sum to 1).
Vector fknn_memberships(const FknnModel& m, std::span<const double> q);

RankedPrediction fknn_predict(const FknnModel& m, std::span<const double> q);

}  // namespace grocat
