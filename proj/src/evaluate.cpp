// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "grocat/errors.hpp"

namespace grocat {

namespace {

std::array<double, 3> topk_accuracy(std::span<const RankedPrediction> preds, std::span<const VarietyId> truths) {
    std::array<double, 3> acc{};
    for (std::size_t k = 1; k <= 3; ++k) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < preds.size(); ++i) hits += topk_hit(preds[i], truths[i], k) ? 1 : 0;
        acc[k - 1] = preds.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(preds.size());
    }
    return acc;
}

template <typename Cell>
std::array<std::size_t, 3> argmax_cells(const std::vector<Cell>& cells) {
    std::array<std::size_t, 3> best{};
    for (std::size_t t = 0; t < 3; ++t) {
        for (std::size_t i = 1; i < cells.size(); ++i) {
            if (cells[i].accuracy[t] > cells[best[t]].accuracy[t]) best[t] = i;
        }
    }
    return best;
}

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Distinct pseudo-words of three consonant-vowel syllables.
std::vector<std::string> make_words(std::size_t count, std::string_view consonants, std::mt19937_64& rng) {
    const std::string_view vowels = "aeiou";
    std::uniform_int_distribution<std::size_t> pick_c(0, consonants.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_v(0, vowels.size() - 1);
    std::set<std::string> seen;
    std::vector<std::string> words;
    while (words.size() < count) {
        std::string w;
        for (int s = 0; s < 3; ++s) {
            w.push_back(consonants[pick_c(rng)]);
            w.push_back(vowels[pick_v(rng)]);
        }
        if (seen.insert(w).second) words.push_back(std::move(w));
    }
    return words;
}

std::vector<std::string> sample(const std::vector<std::string>& pool, std::size_t n, std::mt19937_64& rng) {
    std::vector<std::string> out;
    std::sample(pool.begin(), pool.end(), std::back_inserter(out), std::min(n, pool.size()), rng);
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

std::string two_digits(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02zu", i);
    return buf;
}

struct SynthWords {
    std::vector<std::vector<std::string>> signatures;
    std::vector<std::string> noise;
};

SynthWords synth_words(const SynthConfig& cfg, std::mt19937_64& rng) {
    SynthWords out;
    const auto own = make_words(cfg.varieties * cfg.words_per_signature, "kzxjwv", rng);
    out.noise = make_words(cfg.noise_vocab, "bdfglmnprst", rng);
    const auto shared = static_cast<std::size_t>(std::llround(cfg.overlap * static_cast<double>(cfg.words_per_signature)));
    out.signatures.resize(cfg.varieties);
    for (std::size_t v = 0; v < cfg.varieties; ++v) {
        auto& sig = out.signatures[v];
        const std::size_t base = v * cfg.words_per_signature;
        for (std::size_t j = 0; j < cfg.words_per_signature - shared; ++j) sig.push_back(own[base + j]);
        const std::size_t next = ((v + 1) % cfg.varieties) * cfg.words_per_signature;
        for (std::size_t j = 0; j < shared; ++j) sig.push_back(own[next + j]);
    }
    return out;
}

}  // namespace

SplitIndices split_dataset(std::size_t rows, double ratio_train, std::uint64_t seed) {
    if (!(ratio_train > 0.0 && ratio_train < 1.0)) throw ConfigError("split ratio must be in (0, 1)");
    const auto n_train = static_cast<std::size_t>(std::llround(ratio_train * static_cast<double>(rows)));
    if (n_train == 0 || n_train >= rows) {
        throw DataError("split of " + std::to_string(rows) + " rows at ratio " + std::to_string(ratio_train) +
                        " leaves a partition empty");
    }
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    SplitIndices s;
    s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

bool topk_hit(const RankedPrediction& pred, VarietyId truth, std::size_t k) {
    for (const auto& e : pred.top(k)) {
        if (e.variety == truth) return true;
    }
    return false;
}

std::string_view averaging_name(Averaging a) { return a == Averaging::macro ? "macro" : "micro"; }

Averaging parse_averaging(std::string_view s) {
    if (s == "macro") return Averaging::macro;
    if (s == "micro") return Averaging::micro;
    throw ConfigError("unknown averaging mode '" + std::string(s) + "' (expected macro or micro)");
}

std::string_view topk_rule_name(TopkRule r) { return r == TopkRule::collapse ? "collapse" : "top1"; }

TopkRule parse_topk_rule(std::string_view s) {
    if (s == "collapse") return TopkRule::collapse;
    if (s == "top1") return TopkRule::top1;
    throw ConfigError("unknown top-k rule '" + std::string(s) + "' (expected collapse or top1)");
}

ConfusionCounts confusion_counts(std::span<const VarietyId> predicted, std::span<const VarietyId> truths,
                                 std::size_t classes) {
    if (predicted.size() != truths.size()) throw DataError("confusion: prediction and truth counts differ");
    ConfusionCounts c;
    c.tp.assign(classes, 0);
    c.fp.assign(classes, 0);
    c.fn.assign(classes, 0);
    c.tn.assign(classes, 0);
    c.samples = truths.size();
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const VarietyId t = truths[i];
        const VarietyId p = predicted[i];
        if (t >= classes || (p != kNoPrediction && p >= classes)) throw DataError("confusion: class id out of range");
        if (p == t) {
            ++c.tp[t];
            continue;
        }
        ++c.fn[t];
        if (p != kNoPrediction) ++c.fp[p];
    }
    for (std::size_t k = 0; k < classes; ++k) c.tn[k] = c.samples - c.tp[k] - c.fp[k] - c.fn[k];
    return c;
}

Metrics metrics_from_counts(const ConfusionCounts& counts, std::span<const VarietyId> truths, std::size_t hits,
                            Averaging mode) {
    Metrics m;
    m.mode = mode;
    m.accuracy = ratio(hits, counts.samples);
    if (mode == Averaging::micro) {
        const std::size_t tp = std::accumulate(counts.tp.begin(), counts.tp.end(), std::size_t{0});
        const std::size_t fp = std::accumulate(counts.fp.begin(), counts.fp.end(), std::size_t{0});
        const std::size_t fn = std::accumulate(counts.fn.begin(), counts.fn.end(), std::size_t{0});
        m.precision = ratio(tp, tp + fp);
        m.recall = ratio(tp, tp + fn);
        m.f1 = ratio(2 * tp, 2 * tp + fp + fn);
        return m;
    }
    const std::set<VarietyId> present(truths.begin(), truths.end());
    for (VarietyId c : present) {
        m.precision += ratio(counts.tp[c], counts.tp[c] + counts.fp[c]);
        m.recall += ratio(counts.tp[c], counts.tp[c] + counts.fn[c]);
        m.f1 += ratio(2 * counts.tp[c], 2 * counts.tp[c] + counts.fp[c] + counts.fn[c]);
    }
    const double n = static_cast<double>(present.size());
    if (n > 0) {
        m.precision /= n;
        m.recall /= n;
        m.f1 /= n;
    }
    return m;
}

Metrics evaluate_classifier(std::span<const RankedPrediction> preds, std::span<const VarietyId> truths, std::size_t k,
                            Averaging mode, TopkRule rule) {
    if (preds.size() != truths.size()) throw DataError("evaluate: prediction and truth counts differ");
    if (preds.empty()) throw DataError("evaluate: no samples");
    std::vector<VarietyId> effective(preds.size());
    std::size_t hits = 0;
    std::size_t classes = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool hit = topk_hit(preds[i], truths[i], k);
        hits += hit ? 1 : 0;
        const VarietyId first = preds[i].empty() ? kNoPrediction : preds[i][0].variety;
        effective[i] = (rule == TopkRule::collapse && hit) ? truths[i] : first;
        classes = std::max<std::size_t>(classes, truths[i] + 1);
        if (effective[i] != kNoPrediction) classes = std::max<std::size_t>(classes, effective[i] + 1);
    }
    Metrics m = metrics_from_counts(confusion_counts(effective, truths, classes), truths, hits, mode);
    m.k = k;
    return m;
}

KnnGrid tune_knn(const Matrix& train, std::span<const VarietyId> train_labels, const Matrix& test,
                 std::span<const VarietyId> test_labels, std::size_t varieties, NeighborVariant variant,
                 const KnnTuneOptions& opts) {
    const auto m = static_cast<std::size_t>(train.rows());
    if (opts.ks.empty() || opts.metrics.empty()) throw ConfigError("tune_knn: empty grid");
    if (train_labels.size() != m || test_labels.size() != static_cast<std::size_t>(test.rows())) {
        throw DataError("tune_knn: label counts do not match data");
    }
    if (test.rows() == 0) throw DataError("tune_knn: empty test set");
    const std::size_t k_max = *std::max_element(opts.ks.begin(), opts.ks.end());
    if (*std::min_element(opts.ks.begin(), opts.ks.end()) < 1 || k_max > m) {
        throw ConfigError("tune_knn: k values must lie in [1, " + std::to_string(m) + "]");
    }
    auto init_k_for = [&](std::size_t k) { return opts.fknn.init_k == 0 ? k : opts.fknn.init_k; };
    std::size_t init_max = 0;
    if (variant == NeighborVariant::fknn) {
        if (!(opts.fknn.fuzzifier > 1.0)) throw ConfigError("tune_knn: fuzzifier must be > 1");
        for (auto k : opts.ks) init_max = std::max(init_max, init_k_for(k));
        if (opts.fknn.init == MembershipInit::keller && init_max >= m) {
            throw ConfigError("tune_knn: membership init_k must be smaller than the training set");
        }
    }

    KnnGrid grid;
    const std::vector<MetricKind> metrics = [&] {
        std::set<MetricKind> unique(opts.metrics.begin(), opts.metrics.end());
        return std::vector<MetricKind>(unique.begin(), unique.end());
    }();
    const std::vector<std::size_t> ks = [&] {
        std::set<std::size_t> unique(opts.ks.begin(), opts.ks.end());
        return std::vector<std::size_t>(unique.begin(), unique.end());
    }();

    const auto n_test = static_cast<std::size_t>(test.rows());
    const auto dim = static_cast<std::size_t>(train.cols());
    for (MetricKind kind : metrics) {
        const NeighborIndex index(train, make_metric(kind, train));
        std::vector<std::vector<Neighbor>> test_lists(n_test);
        for (std::size_t q = 0; q < n_test; ++q) {
            test_lists[q] = index.nearest(std::span<const double>(test.row(static_cast<Eigen::Index>(q)).data(), dim), k_max);
        }
        std::vector<std::vector<Neighbor>> train_lists;
        if (variant == NeighborVariant::fknn && opts.fknn.init == MembershipInit::keller) {
            train_lists.resize(m);
            for (std::size_t i = 0; i < m; ++i) {
                const auto row = std::span<const double>(train.row(static_cast<Eigen::Index>(i)).data(), dim);
                train_lists[i] = index.nearest(row, init_max, i);
            }
        }
        for (std::size_t k : ks) {
            Matrix memberships;
            if (variant == NeighborVariant::fknn) {
                memberships = fknn_init_memberships(train_lists, train_labels, varieties, init_k_for(k), opts.fknn.init);
            }
            std::vector<RankedPrediction> preds(n_test);
            for (std::size_t q = 0; q < n_test; ++q) {
                const auto prefix = std::span<const Neighbor>(test_lists[q]).first(k);
                if (variant == NeighborVariant::knn) {
                    preds[q] = rank_by_votes(prefix, train_labels);
                } else {
                    const Vector u = fuzzy_vote(prefix, memberships, opts.fknn.fuzzifier);
                    preds[q] = RankedPrediction::from_scores(std::span<const double>(u.data(), varieties));
                }
            }
            grid.cells.push_back({k, kind, topk_accuracy(preds, test_labels)});
        }
    }
    std::stable_sort(grid.cells.begin(), grid.cells.end(), [](const KnnGridCell& a, const KnnGridCell& b) {
        if (a.k != b.k) return a.k < b.k;
        return static_cast<int>(a.metric) < static_cast<int>(b.metric);
    });
    grid.best = argmax_cells(grid.cells);
    return grid;
}

MlpGrid tune_mlp(const Matrix& train, std::span<const VarietyId> train_labels, const Matrix& test,
                 std::span<const VarietyId> test_labels, std::size_t varieties, const MlpTuneOptions& opts) {
    if (opts.nodes.empty() || opts.epochs.empty()) throw ConfigError("tune_mlp: empty grid");
    if (test.rows() == 0) throw DataError("tune_mlp: empty test set");
    const std::set<std::size_t> nodes(opts.nodes.begin(), opts.nodes.end());
    const std::set<std::size_t> epochs(opts.epochs.begin(), opts.epochs.end());

    MlpGrid grid;
    for (std::size_t n : nodes) {
        MlpConfig cfg = opts.base;
        cfg.nodes = n;
        cfg.epochs = *epochs.rbegin();
        MlpModel init = init_mlp(cfg, static_cast<std::size_t>(train.cols()), varieties);
        train_mlp(std::move(init), train, train_labels, cfg, [&](std::size_t epoch, const MlpModel& model) {
            if (!epochs.contains(epoch)) return;
            const Matrix probs = mlp_forward_batch(model, test);
            std::vector<RankedPrediction> preds(static_cast<std::size_t>(test.rows()));
            for (Eigen::Index q = 0; q < test.rows(); ++q) {
                preds[static_cast<std::size_t>(q)] =
                    RankedPrediction::from_scores(std::span<const double>(probs.row(q).data(), varieties));
            }
            grid.cells.push_back({n, epoch, topk_accuracy(preds, test_labels)});
        });
    }
    grid.best = argmax_cells(grid.cells);
    return grid;
}

void SynthConfig::validate() const {
    if (varieties < 2) throw ConfigError("synth: need at least 2 varieties");
    if (words_per_signature < 1) throw ConfigError("synth: words_per_signature must be >= 1");
    if (products_per_variety < 1) throw ConfigError("synth: products_per_variety must be >= 1");
    if (!(overlap >= 0.0 && overlap <= 1.0)) throw ConfigError("synth: overlap must be in [0, 1]");
    if (signature_words_per_product < 1) throw ConfigError("synth: signature_words_per_product must be >= 1");
    if (noise_words_per_product > noise_vocab) throw ConfigError("synth: noise_words_per_product exceeds noise_vocab");
}

std::vector<std::vector<std::string>> synth_signatures(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    return synth_words(cfg, rng).signatures;
}

Catalog synth_catalog(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const SynthWords words = synth_words(cfg, rng);

    std::vector<Product> products;
    products.reserve(cfg.varieties * cfg.products_per_variety);
    for (std::size_t v = 0; v < cfg.varieties; ++v) {
        for (std::size_t j = 0; j < cfg.products_per_variety; ++j) {
            std::vector<std::string> picked = sample(words.signatures[v], cfg.signature_words_per_product, rng);
            const auto noise = sample(words.noise, cfg.noise_words_per_product, rng);
            picked.insert(picked.end(), noise.begin(), noise.end());
            std::shuffle(picked.begin(), picked.end(), rng);

            Product p;
            const std::size_t index = products.size();
            char ean[32];
            std::snprintf(ean, sizeof ean, "84%011zu", index);
            p.ean = ean;
            p.category = "Category " + two_digits(v % 4);
            p.subcategory = "Subcategory " + two_digits(v % 8);
            p.variety = "Variety " + two_digits(v);
            p.brand = "Brand " + two_digits(index % 10);
            // name: two words, legal name: next two, ingredients: the rest plus a percentage
            for (std::size_t w = 0; w < picked.size(); ++w) {
                std::string& field = w < 2 ? p.name : (w < 4 ? p.legal_name : p.ingredients);
                const char* sep = w < 4 ? " " : ", ";
                if (!field.empty()) field += sep;
                field += w == 0 ? capitalize(picked[w]) : picked[w];
            }
            p.ingredients += p.ingredients.empty() ? "100%" : " (" + std::to_string(10 + index % 90) + "%)";
            products.push_back(std::move(p));
        }
    }
    return make_catalog(std::move(products));
}

}  // namespace grocat
