// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/model_io.hpp"

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include <algorithm>
#include <cstring>
#include <fstream>

#include "grocat/errors.hpp"

namespace grocat {

template <class Archive>
void serialize(Archive& ar, ScoreModel::Posting& p) {
    ar(p.variety, p.count);
}

template <class Archive>
void serialize(Archive& ar, TreeNode& n) {
    ar(n.feature, n.threshold, n.left, n.right, n.value, n.grad_sum, n.hess_sum);
}

namespace {

using Out = cereal::PortableBinaryOutputArchive;
using In = cereal::PortableBinaryInputArchive;

template <typename M>
void write_dense(Out& ar, const M& m) {
    ar(static_cast<std::int64_t>(m.rows()), static_cast<std::int64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) ar(m.data()[i]);
}

template <typename M>
void read_dense(In& ar, M& m) {
    std::int64_t rows = 0, cols = 0;
    ar(rows, cols);
    if (rows < 0 || cols < 0) throw DataError("model file: bad matrix shape");
    if constexpr (M::ColsAtCompileTime == 1) {
        if (cols != 1) throw DataError("model file: bad vector shape");
        m.resize(rows);
    } else {
        m.resize(rows, cols);
    }
    for (Eigen::Index i = 0; i < m.size(); ++i) ar(m.data()[i]);
}

void write_knn(Out& ar, const KnnModel& m) {
    write_dense(ar, m.index.data());
    ar(static_cast<std::uint8_t>(m.index.metric().kind), m.index.metric().inverse_variance);
    ar(m.labels, static_cast<std::uint64_t>(m.varieties), static_cast<std::uint64_t>(m.k));
}

KnnModel read_knn(In& ar) {
    Matrix train;
    read_dense(ar, train);
    std::uint8_t kind = 0;
    DistanceMetric metric;
    ar(kind, metric.inverse_variance);
    if (kind >= kAllMetrics.size()) throw DataError("model file: unknown distance metric");
    metric.kind = static_cast<MetricKind>(kind);
    KnnModel m;
    std::uint64_t varieties = 0, k = 0;
    ar(m.labels, varieties, k);
    m.varieties = varieties;
    m.k = k;
    m.index = NeighborIndex(std::move(train), std::move(metric));
    return m;
}

void write_gbt_config(Out& ar, const GbtConfig& c) {
    ar(static_cast<std::uint64_t>(c.rounds), c.learning_rate, static_cast<std::uint64_t>(c.max_depth), c.lambda, c.gamma,
       c.min_child_weight);
}

GbtConfig read_gbt_config(In& ar) {
    GbtConfig c;
    std::uint64_t rounds = 0, depth = 0;
    ar(rounds, c.learning_rate, depth, c.lambda, c.gamma, c.min_child_weight);
    c.rounds = rounds;
    c.max_depth = depth;
    return c;
}

void write_classifier(Out& ar, const ClassifierModel& classifier) {
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ScoreModel>) {
                ar(m.k, m.b, static_cast<std::uint64_t>(m.varieties), m.lengths, m.average_length, m.postings);
            } else if constexpr (std::is_same_v<T, KnnModel>) {
                write_knn(ar, m);
            } else if constexpr (std::is_same_v<T, FknnModel>) {
                write_knn(ar, m.knn);
                write_dense(ar, m.memberships);
                ar(m.fuzzifier, static_cast<std::uint64_t>(m.init_k), static_cast<std::uint8_t>(m.init));
            } else if constexpr (std::is_same_v<T, GbtModel>) {
                ar(static_cast<std::uint64_t>(m.classes), static_cast<std::uint64_t>(m.features), m.base_score);
                ar(static_cast<std::uint64_t>(m.rounds.size()));
                for (const auto& round : m.rounds) {
                    ar(static_cast<std::uint64_t>(round.size()));
                    for (const auto& tree : round) ar(tree.nodes());
                }
                ar(m.constant_class.has_value(), m.constant_class.value_or(0));
                write_gbt_config(ar, m.config);
            } else {
                ar(static_cast<std::uint64_t>(m.layers.size()));
                for (const auto& layer : m.layers) {
                    write_dense(ar, layer.weights);
                    write_dense(ar, layer.bias);
                }
                ar(m.activation, m.optimizer);
            }
        },
        classifier);
}

ClassifierModel read_classifier(In& ar, ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::bm25: {
            ScoreModel m;
            std::uint64_t varieties = 0;
            ar(m.k, m.b, varieties, m.lengths, m.average_length, m.postings);
            m.varieties = varieties;
            return m;
        }
        case ClassifierKind::knn:
            return read_knn(ar);
        case ClassifierKind::fknn: {
            FknnModel m;
            m.knn = read_knn(ar);
            read_dense(ar, m.memberships);
            std::uint64_t init_k = 0;
            std::uint8_t init = 0;
            ar(m.fuzzifier, init_k, init);
            m.init_k = init_k;
            m.init = init == 0 ? MembershipInit::keller : MembershipInit::crisp;
            return m;
        }
        case ClassifierKind::gbt: {
            GbtModel m;
            std::uint64_t classes = 0, features = 0, rounds = 0;
            ar(classes, features, m.base_score, rounds);
            m.classes = classes;
            m.features = features;
            m.rounds.resize(rounds);
            for (auto& round : m.rounds) {
                std::uint64_t trees = 0;
                ar(trees);
                round.resize(trees);
                for (auto& tree : round) {
                    std::vector<TreeNode> nodes;
                    ar(nodes);
                    tree = RegressionTree(std::move(nodes));
                }
            }
            bool constant = false;
            VarietyId cls = 0;
            ar(constant, cls);
            if (constant) m.constant_class = cls;
            m.config = read_gbt_config(ar);
            return m;
        }
        case ClassifierKind::mlp: {
            MlpModel m;
            std::uint64_t layers = 0;
            ar(layers);
            m.layers.resize(layers);
            for (auto& layer : m.layers) {
                read_dense(ar, layer.weights);
                read_dense(ar, layer.bias);
            }
            ar(m.activation, m.optimizer);
            return m;
        }
    }
    throw DataError("model file: unknown classifier kind");
}

}  // namespace

void save_model(std::ostream& out, const PipelineModel& model) {
    out.write(kModelMagic, sizeof kModelMagic);
    Out ar(out);
    ar(kModelVersion);
    ar(model.varieties.names(), model.vocabulary.words());
    ar(model.stopwords.sorted_words(), model.stopwords.fingerprint());
    ar(model.preprocess.fold_accents, static_cast<std::uint8_t>(model.vocab_scope), model.split_seed);
    ar(model.pca.has_value());
    if (model.pca) {
        write_dense(ar, model.pca->mean);
        write_dense(ar, model.pca->components);
        write_dense(ar, model.pca->eigenvalues);
        ar(model.pca->total_variance, model.pca->degenerate);
    }
    ar(static_cast<std::uint8_t>(model.kind()));
    write_classifier(ar, model.classifier);
    if (!out) throw DataError("model file: write failed");
}

void save_model(const std::filesystem::path& path, const PipelineModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    save_model(out, model);
    out.flush();
    if (!out) throw DataError("model file: write failed for " + path.string());
}

PipelineModel load_model(std::istream& in) {
    char magic[sizeof kModelMagic] = {};
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kModelMagic, sizeof magic) != 0) throw DataError("not a model file (bad magic)");
    try {
        In ar(in);
        std::uint32_t version = 0;
        ar(version);
        if (version != kModelVersion) {
            throw DataError("model file version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(kModelVersion) + ")");
        }
        PipelineModel model;
        std::vector<std::string> names, words, stopwords;
        std::uint64_t fingerprint = 0;
        ar(names, words, stopwords, fingerprint);
        model.varieties = VarietyIndex(std::move(names));
        model.vocabulary = Vocabulary(std::move(words));
        model.stopwords = StopwordSet(stopwords);
        if (model.stopwords.fingerprint() != fingerprint) throw DataError("model file: stopword fingerprint mismatch");
        std::uint8_t scope = 0;
        ar(model.preprocess.fold_accents, scope, model.split_seed);
        model.vocab_scope = scope == 0 ? VocabScope::train : VocabScope::all;
        bool has_pca = false;
        ar(has_pca);
        if (has_pca) {
            PcaModel pca;
            read_dense(ar, pca.mean);
            read_dense(ar, pca.components);
            read_dense(ar, pca.eigenvalues);
            ar(pca.total_variance, pca.degenerate);
            model.pca = std::move(pca);
        }
        std::uint8_t kind = 0;
        ar(kind);
        if (kind >= kAllClassifiers.size()) throw DataError("model file: unknown classifier kind");
        model.classifier = read_classifier(ar, static_cast<ClassifierKind>(kind));
        if (!model.pca && model.kind() != ClassifierKind::bm25) throw DataError("model file: missing PCA model");
        return model;
    } catch (const cereal::Exception& e) {
        throw DataError(std::string("model file is truncated or corrupt: ") + e.what());
    }
}

PipelineModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file " + path.string());
    return load_model(in);
}

}  // namespace grocat
