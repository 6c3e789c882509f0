// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "grocat/errors.hpp"

namespace grocat {

namespace {

std::vector<WordList> pick(const std::vector<WordList>& words, std::span<const std::size_t> rows) {
    std::vector<WordList> out;
    out.reserve(rows.size());
    for (auto r : rows) out.push_back(words.at(r));
    return out;
}

std::vector<VarietyId> pick_labels(const std::vector<VarietyId>& labels, std::span<const std::size_t> rows) {
    std::vector<VarietyId> out;
    out.reserve(rows.size());
    for (auto r : rows) out.push_back(labels.at(r));
    return out;
}

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

Vocabulary scoped_vocabulary(VocabScope scope, const PreparedCatalog& data, std::span<const std::size_t> train_rows) {
    if (scope == VocabScope::all) return build_vocabulary(data.words);
    return build_vocabulary(pick(data.words, train_rows));
}

Matrix dense_rows(const PreparedCatalog& data, std::span<const std::size_t> rows, const Vocabulary& vocab) {
    const auto lists = pick(data.words, rows);
    const auto labels = pick_labels(data.labels, rows);
    return build_product_matrix(lists, vocab, labels, data.varieties.size()).to_dense();
}

// Vocabulary, PCA and projected matrices of one split.
struct Features {
    Vocabulary vocab;
    PcaModel pca;
    Matrix train;
    Matrix test;
};

Features reduce_features(VocabScope scope, std::size_t c, const PreparedCatalog& data,
                         std::span<const std::size_t> train_rows, std::span<const std::size_t> test_rows) {
    Features f;
    f.vocab = scoped_vocabulary(scope, data, train_rows);
    const Matrix x_train = dense_rows(data, train_rows, f.vocab);
    if (scope == VocabScope::all) {
        f.pca = fit_pca(dense_rows(data, all_rows(data.words.size()), f.vocab), c);
    } else {
        f.pca = fit_pca(x_train, c);
    }
    f.train = transform_pca(f.pca, x_train);
    if (!test_rows.empty()) f.test = transform_pca(f.pca, dense_rows(data, test_rows, f.vocab));
    return f;
}

std::span<const double> row_span(const Matrix& m, Eigen::Index i) {
    return {m.row(i).data(), static_cast<std::size_t>(m.cols())};
}

RankedPrediction predict_vector(const ClassifierModel& classifier, std::span<const double> z) {
    return std::visit(
        [&](const auto& model) -> RankedPrediction {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, KnnModel>) {
                return knn_predict(model, z);
            } else if constexpr (std::is_same_v<T, FknnModel>) {
                return fknn_predict(model, z);
            } else if constexpr (std::is_same_v<T, GbtModel>) {
                return gbt_predict(model, z);
            } else if constexpr (std::is_same_v<T, MlpModel>) {
                return mlp_predict(model, z);
            } else {
                throw DataError("pipeline: score model used on a vector input");
            }
        },
        classifier);
}

}  // namespace

StopwordSet load_stopwords(const RunConfig& cfg) { return StopwordSet::from_files(cfg.stopword_files); }

PreparedCatalog prepare_catalog(const Catalog& catalog, const StopwordSet& stopwords, const PreprocessOptions& opts) {
    PreparedCatalog out;
    out.words.reserve(catalog.size());
    for (const auto& p : catalog.products) out.words.push_back(preprocess_product(p, stopwords, opts));
    out.labels = catalog.labels();
    out.varieties = catalog.varieties;
    return out;
}

PipelineModel fit_pipeline(const RunConfig& cfg, ClassifierKind kind, std::size_t pca_components,
                           const PreparedCatalog& data, std::span<const std::size_t> train_rows,
                           const StopwordSet& stopwords) {
    if (train_rows.empty()) throw DataError("pipeline: no training rows");
    PipelineModel model;
    model.varieties = data.varieties;
    model.stopwords = stopwords;
    model.preprocess.fold_accents = cfg.fold_accents;
    model.vocab_scope = cfg.vocab_scope;
    model.split_seed = cfg.split_seed;
    const std::size_t v = data.varieties.size();
    const auto labels = pick_labels(data.labels, train_rows);

    if (kind == ClassifierKind::bm25) {
        model.vocabulary = scoped_vocabulary(cfg.vocab_scope, data, train_rows);
        const auto x = build_product_matrix(pick(data.words, train_rows), model.vocabulary, labels, v);
        model.classifier = fit_score_model(build_variety_matrix(x), cfg.bm25_k, cfg.bm25_b);
        return model;
    }

    Features f = reduce_features(cfg.vocab_scope, pca_components, data, train_rows, {});
    model.vocabulary = std::move(f.vocab);
    model.pca = std::move(f.pca);
    switch (kind) {
        case ClassifierKind::knn:
            model.classifier = fit_knn(std::move(f.train), labels, v, cfg.knn_k, cfg.knn_metric);
            break;
        case ClassifierKind::fknn:
            model.classifier = fit_fknn(std::move(f.train), labels, v, cfg.fknn_k, cfg.fknn_metric, cfg.fknn);
            break;
        case ClassifierKind::gbt:
            model.classifier = fit_gbt(f.train, labels, v, cfg.gbt);
            break;
        case ClassifierKind::mlp: {
            MlpModel init = init_mlp(cfg.mlp, static_cast<std::size_t>(f.train.cols()), v);
            model.classifier = train_mlp(std::move(init), f.train, labels, cfg.mlp).model;
            break;
        }
        case ClassifierKind::bm25:
            break;
    }
    return model;
}

PipelineModel train_model(const RunConfig& cfg, const Catalog& catalog) {
    cfg.validate();
    const StopwordSet stopwords = load_stopwords(cfg);
    const PreparedCatalog data = prepare_catalog(catalog, stopwords, {cfg.fold_accents});
    const auto rows = all_rows(catalog.size());
    return fit_pipeline(cfg, cfg.classifier, cfg.pca_components, data, rows, stopwords);
}

ProductPrediction predict_words(const PipelineModel& model, const WordList& words) {
    ProductPrediction out;
    const TermSet terms = to_term_set(words, model.vocabulary);
    if (terms.empty()) {
        out.out_of_vocabulary = true;
        out.ranking = RankedPrediction::from_scores(std::vector<double>(model.varieties.size(), 0.0));
        return out;
    }
    if (const auto* score = std::get_if<ScoreModel>(&model.classifier)) {
        out.ranking = rank_varieties(*score, terms);
        return out;
    }
    const Vector x = vectorize_new(words, model.vocabulary);
    const Vector z = transform_pca(*model.pca, x);
    out.ranking = predict_vector(model.classifier, {z.data(), static_cast<std::size_t>(z.size())});
    return out;
}

ProductPrediction predict_product(const PipelineModel& model, const Product& product) {
    return predict_words(model, preprocess_product(product, model.stopwords, model.preprocess));
}

std::vector<ProductPrediction> predict_products(const PipelineModel& model, std::span<const Product> products) {
    std::vector<ProductPrediction> out;
    out.reserve(products.size());
    for (const auto& p : products) out.push_back(predict_product(model, p));
    return out;
}

EvaluationRun run_evaluation(const RunConfig& cfg, const Catalog& catalog) {
    cfg.validate();
    EvaluationRun run;
    run.config = cfg;
    const StopwordSet stopwords = load_stopwords(cfg);
    const PreparedCatalog data = prepare_catalog(catalog, stopwords, {cfg.fold_accents});
    const SplitIndices split = split_dataset(catalog.size(), cfg.split_ratio, cfg.split_seed);
    run.train_size = split.train.size();
    run.test_size = split.test.size();
    const auto truths = pick_labels(data.labels, split.test);

    std::vector<ClassifierKind> kinds = cfg.evaluate_classifiers;
    if (kinds.empty()) kinds.push_back(cfg.classifier);
    for (ClassifierKind kind : kinds) {
        EvaluationTable table;
        table.classifier = kind;
        const std::vector<std::size_t> sweep =
            kind == ClassifierKind::bm25 ? std::vector<std::size_t>{0} : cfg.pca_sweep;
        for (std::size_t c : sweep) {
            const PipelineModel model = fit_pipeline(cfg, kind, c, data, split.train, stopwords);
            std::vector<RankedPrediction> preds;
            preds.reserve(split.test.size());
            for (auto r : split.test) preds.push_back(predict_words(model, data.words[r]).ranking);
            EvaluationColumn col;
            col.pca_components = c;
            for (std::size_t k = 1; k <= 3; ++k) {
                col.metrics[k - 1] = evaluate_classifier(preds, truths, k, cfg.averaging, cfg.topk_rule);
            }
            table.columns.push_back(col);
        }
        run.tables.push_back(std::move(table));
    }
    return run;
}

std::string_view tune_target_name(TuneTarget t) {
    switch (t) {
        case TuneTarget::knn: return "knn";
        case TuneTarget::fknn: return "fknn";
        case TuneTarget::mlp: return "mlp";
    }
    return "?";
}

TuneTarget parse_tune_target(std::string_view s) {
    if (s == "knn") return TuneTarget::knn;
    if (s == "fknn") return TuneTarget::fknn;
    if (s == "mlp") return TuneTarget::mlp;
    throw ConfigError("unknown tuning target '" + std::string(s) + "' (expected knn, fknn or mlp)");
}

TuneRun run_tuning(const RunConfig& cfg, const Catalog& catalog, TuneTarget target) {
    cfg.validate();
    TuneRun run;
    run.config = cfg;
    run.target = target;
    const StopwordSet stopwords = load_stopwords(cfg);
    const PreparedCatalog data = prepare_catalog(catalog, stopwords, {cfg.fold_accents});
    const SplitIndices split = split_dataset(catalog.size(), cfg.split_ratio, cfg.split_seed);
    run.train_size = split.train.size();
    run.test_size = split.test.size();
    const auto train_labels = pick_labels(data.labels, split.train);
    const auto test_labels = pick_labels(data.labels, split.test);
    const Features f = reduce_features(cfg.vocab_scope, cfg.pca_components, data, split.train, split.test);
    const std::size_t v = data.varieties.size();

    if (target == TuneTarget::mlp) {
        MlpTuneOptions opts = cfg.tune_mlp;
        opts.base = cfg.mlp;
        run.grid = tune_mlp(f.train, train_labels, f.test, test_labels, v, opts);
    } else {
        KnnTuneOptions opts = cfg.tune_knn;
        opts.fknn = cfg.fknn;
        const auto variant = target == TuneTarget::knn ? NeighborVariant::knn : NeighborVariant::fknn;
        run.grid = tune_knn(f.train, train_labels, f.test, test_labels, v, variant, opts);
    }
    return run;
}

}  // namespace grocat
