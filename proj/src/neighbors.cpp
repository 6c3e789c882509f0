// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "grocat/errors.hpp"

namespace grocat {

namespace {

constexpr std::array<std::string_view, 9> kMetricNames = {
    "cityblock", "cosine", "correlation", "euclidean", "seuclidean", "jaccard", "hamming", "chebychev", "spearman",
};

double pearson_distance(std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<double>(a.size());
    const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 1.0;
    return std::clamp(1.0 - sab / std::sqrt(saa * sbb), 0.0, 2.0);
}

// `a` and `b` are rank vectors for spearman, raw coordinates otherwise.
double prepared_distance(std::span<const double> a, std::span<const double> b, const DistanceMetric& metric) {
    const std::size_t n = a.size();
    switch (metric.kind) {
        case MetricKind::cityblock: {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
            return s;
        }
        case MetricKind::euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(s);
        }
        case MetricKind::seuclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += metric.inverse_variance[i] * (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(s);
        }
        case MetricKind::chebychev: {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s = std::max(s, std::abs(a[i] - b[i]));
            return s;
        }
        case MetricKind::cosine: {
            double ab = 0.0, aa = 0.0, bb = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ab += a[i] * b[i];
                aa += a[i] * a[i];
                bb += b[i] * b[i];
            }
            if (aa == 0.0 || bb == 0.0) return 1.0;
            return std::clamp(1.0 - ab / std::sqrt(aa * bb), 0.0, 2.0);
        }
        case MetricKind::correlation:
        case MetricKind::spearman:
            return pearson_distance(a, b);
        case MetricKind::jaccard: {
            double lo = 0.0, hi = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double ap = std::max(a[i], 0.0), an = std::max(-a[i], 0.0);
                const double bp = std::max(b[i], 0.0), bn = std::max(-b[i], 0.0);
                lo += std::min(ap, bp) + std::min(an, bn);
                hi += std::max(ap, bp) + std::max(an, bn);
            }
            if (hi == 0.0) return 0.0;
            return std::clamp(1.0 - lo / hi, 0.0, 1.0);
        }
        case MetricKind::hamming: {
            std::size_t differ = 0;
            for (std::size_t i = 0; i < n; ++i) differ += a[i] != b[i] ? 1 : 0;
            return static_cast<double>(differ) / static_cast<double>(n);
        }
    }
    return 0.0;
}

void check_dims(std::size_t a, std::size_t b, const DistanceMetric& metric) {
    if (a != b) throw DataError("distance: dimension mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
    if (a == 0) throw DataError("distance: empty vectors");
    if ((metric.kind == MetricKind::correlation || metric.kind == MetricKind::spearman) && a < 2) {
        throw DataError("distance: " + std::string(metric_name(metric.kind)) + " needs dimension >= 2");
    }
    if (metric.kind == MetricKind::seuclidean && metric.inverse_variance.size() != a) {
        throw ConfigError("distance: seuclidean scales not fitted for dimension " + std::to_string(a));
    }
}

}  // namespace

std::string_view metric_name(MetricKind kind) { return kMetricNames[static_cast<std::size_t>(kind)]; }

MetricKind parse_metric(std::string_view name) {
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        if (kMetricNames[i] == name) return static_cast<MetricKind>(i);
    }
    throw ConfigError("unknown distance metric '" + std::string(name) + "'");
}

DistanceMetric make_metric(MetricKind kind, const Matrix& train) {
    DistanceMetric metric{kind, {}};
    if (kind != MetricKind::seuclidean) return metric;
    const auto m = train.rows();
    metric.inverse_variance.assign(static_cast<std::size_t>(train.cols()), 0.0);
    if (m < 2) return metric;
    for (Eigen::Index j = 0; j < train.cols(); ++j) {
        const double mean = train.col(j).mean();
        const double var = (train.col(j).array() - mean).square().sum() / static_cast<double>(m - 1);
        metric.inverse_variance[static_cast<std::size_t>(j)] = var > 0.0 ? 1.0 / var : 0.0;
    }
    return metric;
}

std::vector<double> fractional_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double distance(std::span<const double> a, std::span<const double> b, const DistanceMetric& metric) {
    check_dims(a.size(), b.size(), metric);
    if (metric.kind == MetricKind::spearman) {
        const auto ra = fractional_ranks(a);
        const auto rb = fractional_ranks(b);
        return prepared_distance(ra, rb, metric);
    }
    return prepared_distance(a, b, metric);
}

NeighborIndex::NeighborIndex(Matrix train, DistanceMetric metric) : train_(std::move(train)), metric_(std::move(metric)) {
    if (metric_.kind == MetricKind::spearman) {
        prepared_.resize(train_.rows(), train_.cols());
        for (Eigen::Index i = 0; i < train_.rows(); ++i) {
            const auto r = fractional_ranks(std::span<const double>(train_.row(i).data(), dim()));
            prepared_.row(i) = Eigen::Map<const Eigen::RowVectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
        }
    }
}

std::vector<Neighbor> NeighborIndex::nearest(std::span<const double> q, std::size_t k,
                                             std::optional<std::size_t> exclude) const {
    const std::size_t m = size();
    if (m > 0) check_dims(q.size(), dim(), metric_);

    std::vector<double> q_ranks;
    std::span<const double> query = q;
    const Matrix* rows = &train_;
    if (metric_.kind == MetricKind::spearman) {
        q_ranks = fractional_ranks(q);
        query = q_ranks;
        rows = &prepared_;
    }

    std::vector<Neighbor> all;
    all.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (exclude && *exclude == i) continue;
        const auto row = std::span<const double>(rows->row(static_cast<Eigen::Index>(i)).data(), dim());
        all.push_back({i, prepared_distance(query, row, metric_)});
    }
    const std::size_t take = std::min(k, all.size());
    auto closer = [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    };
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), closer);
    all.resize(take);
    return all;
}

KnnModel fit_knn(Matrix train, std::vector<VarietyId> labels, std::size_t varieties, std::size_t k, MetricKind kind) {
    const auto m = static_cast<std::size_t>(train.rows());
    if (m == 0) throw DataError("knn: empty training set");
    if (labels.size() != m) throw DataError("knn: label count does not match training rows");
    if (k < 1 || k > m) {
        throw ConfigError("knn: k = " + std::to_string(k) + " outside [1, " + std::to_string(m) + "]");
    }
    if (!train.allFinite()) throw NumericError("knn: training data contains non-finite values");
    for (auto l : labels) {
        if (l >= varieties) throw DataError("knn: label out of range");
    }
    DistanceMetric metric = make_metric(kind, train);
    KnnModel model;
    model.index = NeighborIndex(std::move(train), std::move(metric));
    model.labels = std::move(labels);
    model.varieties = varieties;
    model.k = k;
    return model;
}

RankedPrediction rank_by_votes(std::span<const Neighbor> neighbors, std::span<const VarietyId> labels) {
    struct Tally {
        VarietyId variety;
        std::size_t votes;
        std::size_t first;  // position of the closest neighbor of this variety
    };
    std::vector<Tally> tally;
    for (std::size_t pos = 0; pos < neighbors.size(); ++pos) {
        const VarietyId v = labels[neighbors[pos].index];
        auto it = std::find_if(tally.begin(), tally.end(), [v](const Tally& t) { return t.variety == v; });
        if (it == tally.end()) {
            tally.push_back({v, 1, pos});
        } else {
            ++it->votes;
        }
    }
    std::sort(tally.begin(), tally.end(), [](const Tally& a, const Tally& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        if (a.first != b.first) return a.first < b.first;
        return a.variety < b.variety;
    });
    std::vector<RankedEntry> entries;
    entries.reserve(tally.size());
    const auto total = static_cast<double>(neighbors.size());
    for (const auto& t : tally) entries.push_back({t.variety, static_cast<double>(t.votes) / total});
    return RankedPrediction(std::move(entries));
}

RankedPrediction knn_predict(const KnnModel& m, std::span<const double> q) {
    const auto neighbors = m.index.nearest(q, m.k);
    return rank_by_votes(neighbors, m.labels);
}

Matrix fknn_init_memberships(std::span<const std::vector<Neighbor>> neighbor_lists, std::span<const VarietyId> labels,
                             std::size_t varieties, std::size_t init_k, MembershipInit init) {
    const std::size_t m = labels.size();
    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(varieties));
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        if (init == MembershipInit::crisp) {
            u(row, labels[i]) = 1.0;
            continue;
        }
        const auto& list = neighbor_lists[i];
        if (list.size() < init_k) throw DataError("fknn: neighbor list shorter than init_k");
        for (std::size_t t = 0; t < init_k; ++t) {
            u(row, labels[list[t].index]) += 0.49 / static_cast<double>(init_k);
        }
        u(row, labels[i]) += 0.51;
        u.row(row) /= u.row(row).sum();
    }
    return u;
}

Matrix fknn_init_memberships(const NeighborIndex& index, std::span<const VarietyId> labels, std::size_t varieties,
                             std::size_t init_k, MembershipInit init) {
    const std::size_t m = index.size();
    if (init_k < 1) throw ConfigError("fknn: init_k must be >= 1");
    if (init == MembershipInit::keller && init_k >= m) {
        throw ConfigError("fknn: init_k = " + std::to_string(init_k) + " must be smaller than the " +
                          std::to_string(m) + " training samples");
    }
    std::vector<std::vector<Neighbor>> lists(init == MembershipInit::keller ? m : 0);
    for (std::size_t i = 0; i < lists.size(); ++i) {
        const auto row = std::span<const double>(index.data().row(static_cast<Eigen::Index>(i)).data(), index.dim());
        lists[i] = index.nearest(row, init_k, i);
    }
    return fknn_init_memberships(lists, labels, varieties, init_k, init);
}

FknnModel fit_fknn(Matrix train, std::vector<VarietyId> labels, std::size_t varieties, std::size_t k, MetricKind kind,
                   const FknnOptions& opts) {
    if (!(opts.fuzzifier > 1.0)) throw ConfigError("fknn: fuzzifier must be > 1");
    FknnModel model;
    model.knn = fit_knn(std::move(train), std::move(labels), varieties, k, kind);
    model.fuzzifier = opts.fuzzifier;
    model.init_k = opts.init_k == 0 ? k : opts.init_k;
    model.init = opts.init;
    model.memberships = fknn_init_memberships(model.knn.index, model.knn.labels, varieties, model.init_k, model.init);
    return model;
}

Vector fuzzy_vote(std::span<const Neighbor> neighbors, const Matrix& memberships, double fuzzifier) {
    const auto v = memberships.cols();
    if (neighbors.empty()) return Vector::Constant(v, 1.0 / static_cast<double>(v));
    if (neighbors.front().distance == 0.0) {
        return memberships.row(static_cast<Eigen::Index>(neighbors.front().index)).transpose();
    }
    // Weights relative to the closest neighbor; the ratio keeps tiny distances finite.
    const double exponent = 2.0 / (fuzzifier - 1.0);
    const double closest = neighbors.front().distance;
    Vector score = Vector::Zero(v);
    double total = 0.0;
    for (const auto& nb : neighbors) {
        const double w = std::pow(closest / nb.distance, exponent);
        score += w * memberships.row(static_cast<Eigen::Index>(nb.index)).transpose();
        total += w;
    }
    return score / total;
}

Vector fknn_memberships(const FknnModel& m, std::span<const double> q) {
    const auto neighbors = m.knn.index.nearest(q, m.knn.k);
    return fuzzy_vote(neighbors, m.memberships, m.fuzzifier);
}

RankedPrediction fknn_predict(const FknnModel& m, std::span<const double> q) {
    const Vector u = fknn_memberships(m, q);
    return RankedPrediction::from_scores(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())));
}

}  // namespace grocat
