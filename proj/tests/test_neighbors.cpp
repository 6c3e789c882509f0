// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "grocat/errors.hpp"
#include "grocat/neighbors.hpp"
#include "test_util.hpp"

using namespace grocat;
using grocat::testing::random_labels;
using grocat::testing::random_matrix;
using grocat::testing::row_of;

namespace {

const std::vector<double> kA = {1.0, -2.0, 3.5, 0.0, 2.0};
const std::vector<double> kB = {0.5, 1.0, -1.0, 2.0, 2.0};

Matrix scale_train() {
    Matrix t(4, 5);
    t << 1, 2, 3, 4, 5, 2, 0, 1, 3, 1, 0, 1, 1, 0, 2, 3, 3, 0, 1, 1;
    return t;
}

}  // namespace

// Reference values from SciPy (jaccard from the signed min/max formula).
TEST(Distance, MatchesReference) {
    const Matrix train = scale_train();
    const std::map<MetricKind, double> expected = {
        {MetricKind::cityblock, 10.0},
        {MetricKind::cosine, 1.0677576913315143},
        {MetricKind::correlation, 1.489025279439604},
        {MetricKind::euclidean, 5.787918451395113},
        {MetricKind::seuclidean, 4.420347688158764},
        {MetricKind::jaccard, 0.8},
        {MetricKind::hamming, 0.8},
        {MetricKind::chebychev, 4.5},
        {MetricKind::spearman, 1.4103913408340616},
    };
    for (auto [kind, value] : expected) {
        EXPECT_NEAR(distance(kA, kB, make_metric(kind, train)), value, 1e-12) << metric_name(kind);
    }
}

TEST(Distance, SimpleCases) {
    const DistanceMetric eu{MetricKind::euclidean, {}};
    EXPECT_DOUBLE_EQ(distance(std::vector<double>{0, 0}, std::vector<double>{3, 4}, eu), 5.0);
    const DistanceMetric cos{MetricKind::cosine, {}};
    EXPECT_EQ(distance(std::vector<double>{0, 0}, std::vector<double>{1, 0}, cos), 1.0);
    const DistanceMetric corr{MetricKind::correlation, {}};
    EXPECT_EQ(distance(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}, corr), 1.0);
    const DistanceMetric jac{MetricKind::jaccard, {}};
    EXPECT_EQ(distance(std::vector<double>{0, 0}, std::vector<double>{0, 0}, jac), 0.0);
    EXPECT_DOUBLE_EQ(distance(std::vector<double>{1, 1, 0}, std::vector<double>{1, 0, 1}, jac), 2.0 / 3.0);
}

TEST(Distance, SeuclideanIgnoresConstantColumns) {
    Matrix t(3, 2);
    t << 1, 5, 2, 5, 3, 5;
    const auto m = make_metric(MetricKind::seuclidean, t);
    EXPECT_EQ(m.inverse_variance[1], 0.0);
    EXPECT_DOUBLE_EQ(distance(std::vector<double>{0, 0}, std::vector<double>{1, 100}, m), 1.0);
}

TEST(Distance, Errors) {
    const DistanceMetric eu{MetricKind::euclidean, {}};
    EXPECT_THROW(distance(std::vector<double>{1, 2}, std::vector<double>{1}, eu), DataError);
    const DistanceMetric sp{MetricKind::spearman, {}};
    EXPECT_THROW(distance(std::vector<double>{1}, std::vector<double>{2}, sp), DataError);
    const DistanceMetric se{MetricKind::seuclidean, {}};
    EXPECT_THROW(distance(std::vector<double>{1}, std::vector<double>{2}, se), ConfigError);
    EXPECT_THROW(parse_metric("chebyshev"), ConfigError);
    for (auto k : kAllMetrics) EXPECT_EQ(parse_metric(metric_name(k)), k);
}

TEST(Distance, FractionalRanks) {
    EXPECT_EQ(fractional_ranks(std::vector<double>{10, 30, 20, 30}), (std::vector<double>{1, 3.5, 2, 3.5}));
}

TEST(Distance, LawsOnRandomVectors) {
    const Matrix train = random_matrix(30, 6, 17);
    const Matrix pts = random_matrix(60, 6, 18, -2.0, 2.0);
    for (auto kind : kAllMetrics) {
        const auto metric = make_metric(kind, train);
        for (Eigen::Index i = 0; i + 2 < pts.rows(); i += 3) {
            const auto a = row_of(pts, i), b = row_of(pts, i + 1), c = row_of(pts, i + 2);
            EXPECT_NEAR(distance(a, a, metric), 0.0, 1e-12) << metric_name(kind);
            EXPECT_EQ(distance(a, b, metric), distance(b, a, metric)) << metric_name(kind);
            const double d = distance(a, b, metric);
            EXPECT_GE(d, 0.0);
            if (kind == MetricKind::cosine || kind == MetricKind::correlation || kind == MetricKind::spearman) {
                EXPECT_LE(d, 2.0);
            }
            if (kind == MetricKind::jaccard || kind == MetricKind::hamming) EXPECT_LE(d, 1.0);
            if (kind == MetricKind::euclidean || kind == MetricKind::cityblock || kind == MetricKind::chebychev ||
                kind == MetricKind::hamming) {
                EXPECT_LE(distance(a, c, metric), d + distance(b, c, metric) + 1e-12) << metric_name(kind);
            }
        }
    }
}

TEST(NeighborIndex, OrderedByDistanceThenIndex) {
    Matrix t(4, 1);
    t << 1, -1, 2, 1;
    const NeighborIndex idx(t, {MetricKind::euclidean, {}});
    const auto nb = idx.nearest(std::vector<double>{0}, 4);
    ASSERT_EQ(nb.size(), 4u);
    EXPECT_EQ(nb[0].index, 0u);
    EXPECT_EQ(nb[1].index, 1u);
    EXPECT_EQ(nb[2].index, 3u);
    EXPECT_EQ(nb[3].index, 2u);
    const auto ex = idx.nearest(std::vector<double>{1}, 2, 0);
    EXPECT_EQ(ex[0].index, 3u);
    EXPECT_EQ(idx.nearest(std::vector<double>{0}, 10).size(), 4u);
}

TEST(Knn, VotesAndTieBreak) {
    const std::vector<VarietyId> labels = {2, 1, 1, 2, 0};
    // Two votes each for 1 and 2; variety 2 owns the closest neighbor.
    const std::vector<Neighbor> nb = {{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}, {4, 0.5}};
    const auto r = rank_by_votes(nb, labels);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].variety, 2u);
    EXPECT_EQ(r[1].variety, 1u);
    EXPECT_EQ(r[2].variety, 0u);
    EXPECT_DOUBLE_EQ(r[0].score, 0.4);
    EXPECT_DOUBLE_EQ(r[2].score, 0.2);
}

TEST(Knn, MatchesBruteForce) {
    const Matrix train = random_matrix(80, 5, 21);
    const auto labels = random_labels(80, 4, 22);
    const Matrix queries = random_matrix(15, 5, 23);
    for (auto kind : kAllMetrics) {
        const auto model = fit_knn(train, labels, 4, 5, kind);
        for (Eigen::Index q = 0; q < queries.rows(); ++q) {
            std::vector<std::pair<double, std::size_t>> all;
            for (Eigen::Index i = 0; i < train.rows(); ++i) {
                all.push_back({distance(row_of(queries, q), row_of(train, i), model.index.metric()), static_cast<std::size_t>(i)});
            }
            std::sort(all.begin(), all.end());
            const auto nb = model.index.nearest(row_of(queries, q), 5);
            for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(nb[t].index, all[t].second) << metric_name(kind);
        }
    }
    EXPECT_THROW(fit_knn(train, labels, 4, 81, MetricKind::euclidean), ConfigError);
    EXPECT_THROW(fit_knn(train, labels, 4, 0, MetricKind::euclidean), ConfigError);
}

TEST(Fknn, KellerInitialization) {
    // Sample 0 (class 0) has neighbors of classes 0, 1, 0.
    Matrix t(5, 1);
    t << 0.0, 0.1, 0.2, 0.3, 5.0;
    const std::vector<VarietyId> labels = {0, 0, 1, 0, 1};
    const NeighborIndex idx(t, {MetricKind::euclidean, {}});
    const Matrix u = fknn_init_memberships(idx, labels, 2, 3, MembershipInit::keller);
    EXPECT_NEAR(u(0, 0), 0.51 + 0.49 * 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(u(0, 1), 0.49 / 3.0, 1e-14);
    for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(u.row(i).sum(), 1.0, 1e-14);
    const Matrix crisp = fknn_init_memberships(idx, labels, 2, 3, MembershipInit::crisp);
    EXPECT_EQ(crisp(2, 1), 1.0);
    EXPECT_EQ(crisp(2, 0), 0.0);
    EXPECT_THROW(fknn_init_memberships(idx, labels, 2, 5, MembershipInit::keller), ConfigError);
}

TEST(Fknn, VoteWeights) {
    Matrix u(2, 2);
    u << 1, 0, 0, 1;
    const std::vector<Neighbor> nb = {{0, 1.0}, {1, 2.0}};
    // fm = 2: weights 1/d^2 -> 1 and 1/4.
    const Vector s = fuzzy_vote(nb, u, 2.0);
    EXPECT_NEAR(s(0), 0.8, 1e-14);
    EXPECT_NEAR(s(1), 0.2, 1e-14);
    const std::vector<Neighbor> exact = {{1, 0.0}, {0, 1.0}};
    EXPECT_EQ(fuzzy_vote(exact, u, 2.0), Vector(u.row(1).transpose()));
}

TEST(Fknn, ScoresSumToOneAndCrispK1IsKnn) {
    const Matrix train = random_matrix(60, 4, 31);
    const auto labels = random_labels(60, 5, 32);
    const Matrix queries = random_matrix(40, 4, 33);
    for (auto kind : {MetricKind::euclidean, MetricKind::cosine, MetricKind::spearman}) {
        const auto fk = fit_fknn(train, labels, 5, 7, kind);
        FknnOptions crisp;
        crisp.init = MembershipInit::crisp;
        const auto fk1 = fit_fknn(train, labels, 5, 1, kind, crisp);
        const auto k1 = fit_knn(train, labels, 5, 1, kind);
        for (Eigen::Index q = 0; q < queries.rows(); ++q) {
            EXPECT_NEAR(fknn_memberships(fk, row_of(queries, q)).sum(), 1.0, 1e-12);
            EXPECT_EQ(fknn_predict(fk1, row_of(queries, q))[0].variety, knn_predict(k1, row_of(queries, q))[0].variety);
        }
    }
}
