// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "grocat/errors.hpp"

namespace grocat {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        auto item = trim(s.substr(start, end - start));
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + s + "'");
    }
    return value;
}

double parse_real(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string(key) + ": expected a number, got '" + s + "'");
    }
}

bool parse_bool(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + s + "'");
}

std::string real_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += fmt(items[i]);
    }
    return out;
}

std::vector<std::size_t> parse_size_list(std::string_view key, std::string_view text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) out.push_back(parse_integer<std::size_t>(key, item));
    return out;
}

std::string size_text(std::size_t v) { return std::to_string(v); }

std::string_view init_name(MembershipInit i) { return i == MembershipInit::keller ? "keller" : "crisp"; }

MembershipInit parse_init(std::string_view s) {
    if (s == "keller") return MembershipInit::keller;
    if (s == "crisp") return MembershipInit::crisp;
    throw ConfigError("fknn.init: expected keller or crisp, got '" + std::string(s) + "'");
}

struct Entry {
    const char* key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
};

#define GROCAT_SIZE(KEY, FIELD)                                                                         \
    Entry {                                                                                             \
        KEY, [](const RunConfig& c) { return std::to_string(c.FIELD); },                                \
            [](RunConfig& c, std::string_view k, std::string_view v) { c.FIELD = parse_integer<std::size_t>(k, v); } \
    }
#define GROCAT_U64(KEY, FIELD)                                                                          \
    Entry {                                                                                             \
        KEY, [](const RunConfig& c) { return std::to_string(c.FIELD); },                                \
            [](RunConfig& c, std::string_view k, std::string_view v) { c.FIELD = parse_integer<std::uint64_t>(k, v); } \
    }
#define GROCAT_REAL(KEY, FIELD)                                                                         \
    Entry {                                                                                             \
        KEY, [](const RunConfig& c) { return real_text(c.FIELD); },                                     \
            [](RunConfig& c, std::string_view k, std::string_view v) { c.FIELD = parse_real(k, v); }   \
    }
#define GROCAT_TEXT(KEY, FIELD)                                                                         \
    Entry {                                                                                             \
        KEY, [](const RunConfig& c) { return c.FIELD; },                                                \
            [](RunConfig& c, std::string_view, std::string_view v) { c.FIELD = trim(v); }               \
    }

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = {
        {"catalog.delimiter",
         [](const RunConfig& c) { return c.format.delimiter == '\t' ? std::string("tab") : std::string(1, c.format.delimiter); },
         [](RunConfig& c, std::string_view k, std::string_view v) {
             // Not trimmed: a delimiter may itself be whitespace.
             if (v == "tab" || v == "\\t") {
                 c.format.delimiter = '\t';
             } else if (v.size() == 1 && v != "\"" && v != "\n" && v != "\r") {
                 c.format.delimiter = v[0];
             } else {
                 throw ConfigError(std::string(k) + ": expected a single character or 'tab'");
             }
         }},
        GROCAT_TEXT("catalog.ean_column", format.columns.ean),
        GROCAT_TEXT("catalog.category_column", format.columns.category),
        GROCAT_TEXT("catalog.subcategory_column", format.columns.subcategory),
        GROCAT_TEXT("catalog.variety_column", format.columns.variety),
        GROCAT_TEXT("catalog.brand_column", format.columns.brand),
        GROCAT_TEXT("catalog.name_column", format.columns.name),
        GROCAT_TEXT("catalog.legal_name_column", format.columns.legal_name),
        GROCAT_TEXT("catalog.ingredients_column", format.columns.ingredients),
        {"text.stopwords",
         [](const RunConfig& c) { return join(c.stopword_files, [](const auto& p) { return p.string(); }); },
         [](RunConfig& c, std::string_view, std::string_view v) {
             c.stopword_files.clear();
             for (auto& item : split_list(v)) c.stopword_files.emplace_back(item);
         }},
        {"text.fold_accents", [](const RunConfig& c) { return std::string(c.fold_accents ? "true" : "false"); },
         [](RunConfig& c, std::string_view k, std::string_view v) { c.fold_accents = parse_bool(k, v); }},
        {"pipeline.classifier", [](const RunConfig& c) { return std::string(classifier_name(c.classifier)); },
         [](RunConfig& c, std::string_view, std::string_view v) { c.classifier = parse_classifier(trim(v)); }},
        GROCAT_SIZE("pipeline.pca_components", pca_components),
        {"pipeline.vocab_scope", [](const RunConfig& c) { return std::string(vocab_scope_name(c.vocab_scope)); },
         [](RunConfig& c, std::string_view, std::string_view v) { c.vocab_scope = parse_vocab_scope(trim(v)); }},
        GROCAT_REAL("pipeline.split_ratio", split_ratio),
        GROCAT_U64("pipeline.split_seed", split_seed),
        GROCAT_REAL("bm25.k", bm25_k),
        GROCAT_REAL("bm25.b", bm25_b),
        GROCAT_SIZE("knn.k", knn_k),
        {"knn.metric", [](const RunConfig& c) { return std::string(metric_name(c.knn_metric)); },
         [](RunConfig& c, std::string_view, std::string_view v) { c.knn_metric = parse_metric(trim(v)); }},
        GROCAT_SIZE("fknn.k", fknn_k),
        {"fknn.metric", [](const RunConfig& c) { return std::string(metric_name(c.fknn_metric)); },
         [](RunConfig& c, std::string_view, std::string_view v) { c.fknn_metric = parse_metric(trim(v)); }},
        GROCAT_REAL("fknn.fuzzifier", fknn.fuzzifier),
        GROCAT_SIZE("fknn.init_k", fknn.init_k),
        {"fknn.init", [](const RunConfig& c) { return std::string(init_name(c.fknn.init)); },
         [](RunConfig& c, std::string_view, std::string_view v) { c.fknn.init = parse_init(trim(v)); }},
        GROCAT_SIZE("gbt.rounds", gbt.rounds),
        GROCAT_REAL("gbt.learning_rate", gbt.learning_rate),
        GROCAT_SIZE("gbt.max_depth", gbt.max_depth),
        GROCAT_REAL("gbt.lambda", gbt.lambda),
        GROCAT_REAL("gbt.gamma", gbt.gamma),
        GROCAT_REAL("gbt.min_child_weight", gbt.min_child_weight),
        GROCAT_SIZE("mlp.hidden_layers", mlp.hidden_layers),
        GROCAT_SIZE("mlp.nodes", mlp.nodes),
        GROCAT_SIZE("mlp.epochs", mlp.epochs),
        GROCAT_REAL("mlp.learning_rate", mlp.learning_rate),
        GROCAT_SIZE("mlp.batch_size", mlp.batch_size),
        GROCAT_U64("mlp.seed", mlp.seed),
        {"evaluate.classifiers",
         [](const RunConfig& c) {
             return join(c.evaluate_classifiers, [](ClassifierKind k) { return std::string(classifier_name(k)); });
         },
         [](RunConfig& c, std::string_view, std::string_view v) {
             c.evaluate_classifiers.clear();
             for (const auto& item : split_list(v)) c.evaluate_classifiers.push_back(parse_classifier(item));
         }},
        {"evaluate.pca_sweep", [](const RunConfig& c) { return join(c.pca_sweep, size_text); },
         [](RunConfig& c, std::string_view k, std::string_view v) { c.pca_sweep = parse_size_list(k, v); }},
        {"evaluate.averaging", [](const RunConfig& c) { return std::string(averaging_name(c.averaging)); },
         [](RunConfig& c, std::string_view, std::string_view v) { c.averaging = parse_averaging(trim(v)); }},
        {"evaluate.topk_rule", [](const RunConfig& c) { return std::string(topk_rule_name(c.topk_rule)); },
         [](RunConfig& c, std::string_view, std::string_view v) { c.topk_rule = parse_topk_rule(trim(v)); }},
        {"tune.ks", [](const RunConfig& c) { return join(c.tune_knn.ks, size_text); },
         [](RunConfig& c, std::string_view k, std::string_view v) { c.tune_knn.ks = parse_size_list(k, v); }},
        {"tune.metrics",
         [](const RunConfig& c) {
             return join(c.tune_knn.metrics, [](MetricKind m) { return std::string(metric_name(m)); });
         },
         [](RunConfig& c, std::string_view, std::string_view v) {
             c.tune_knn.metrics.clear();
             for (const auto& item : split_list(v)) c.tune_knn.metrics.push_back(parse_metric(item));
         }},
        {"tune.nodes", [](const RunConfig& c) { return join(c.tune_mlp.nodes, size_text); },
         [](RunConfig& c, std::string_view k, std::string_view v) { c.tune_mlp.nodes = parse_size_list(k, v); }},
        {"tune.epochs", [](const RunConfig& c) { return join(c.tune_mlp.epochs, size_text); },
         [](RunConfig& c, std::string_view k, std::string_view v) { c.tune_mlp.epochs = parse_size_list(k, v); }},
    };
    return table;
}

#undef GROCAT_SIZE
#undef GROCAT_U64
#undef GROCAT_REAL
#undef GROCAT_TEXT

}  // namespace

std::string_view classifier_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::bm25: return "bm25";
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::fknn: return "fknn";
        case ClassifierKind::gbt: return "gbt";
        case ClassifierKind::mlp: return "mlp";
    }
    return "?";
}

ClassifierKind parse_classifier(std::string_view name) {
    for (auto k : kAllClassifiers) {
        if (classifier_name(k) == name) return k;
    }
    throw ConfigError("unknown classifier '" + std::string(name) + "' (expected bm25, knn, fknn, gbt or mlp)");
}

std::string_view vocab_scope_name(VocabScope s) { return s == VocabScope::train ? "train" : "all"; }

VocabScope parse_vocab_scope(std::string_view s) {
    if (s == "train") return VocabScope::train;
    if (s == "all") return VocabScope::all;
    throw ConfigError("unknown vocabulary scope '" + std::string(s) + "' (expected train or all)");
}

std::vector<std::filesystem::path> RunConfig::default_stopword_files() {
    const std::filesystem::path dir = GROCAT_DATA_DIR;
    return {dir / "stopwords_es.txt", dir / "stopwords_en.txt"};
}

void RunConfig::validate() const {
    if (format.columns.ean.empty() || format.columns.name.empty() || format.columns.legal_name.empty() ||
        format.columns.ingredients.empty()) {
        throw ConfigError("catalog: ean, name, legal_name and ingredients columns must be named");
    }
    if (pca_components < 1) throw ConfigError("pipeline.pca_components must be >= 1");
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ConfigError("pipeline.split_ratio must be in (0, 1)");
    if (!(bm25_k >= 0.0)) throw ConfigError("bm25.k must be >= 0");
    if (!(bm25_b >= 0.0 && bm25_b <= 1.0)) throw ConfigError("bm25.b must be in [0, 1]");
    if (knn_k < 1) throw ConfigError("knn.k must be >= 1");
    if (fknn_k < 1) throw ConfigError("fknn.k must be >= 1");
    if (!(fknn.fuzzifier > 1.0)) throw ConfigError("fknn.fuzzifier must be > 1");
    gbt.validate();
    mlp.validate();
    if (pca_sweep.empty()) throw ConfigError("evaluate.pca_sweep must not be empty");
    for (auto c : pca_sweep) {
        if (c < 1) throw ConfigError("evaluate.pca_sweep entries must be >= 1");
    }
    if (tune_knn.ks.empty() || tune_knn.metrics.empty()) throw ConfigError("tune.ks and tune.metrics must not be empty");
    for (auto k : tune_knn.ks) {
        if (k < 1) throw ConfigError("tune.ks entries must be >= 1");
    }
    if (tune_mlp.nodes.empty() || tune_mlp.epochs.empty()) throw ConfigError("tune.nodes and tune.epochs must not be empty");
    for (auto n : tune_mlp.nodes) {
        if (n < 1) throw ConfigError("tune.nodes entries must be >= 1");
    }
    for (auto e : tune_mlp.epochs) {
        if (e < 1) throw ConfigError("tune.epochs entries must be >= 1");
    }
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
    for (const auto& e : entries()) {
        if (key == e.key) {
            e.set(cfg, key, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form section.key=value");
    }
    set_config_value(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

RunConfig parse_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' is outside any section");
        for (const auto& [key, value] : body) {
            set_config_value(cfg, section + "." + key, value.get_value<std::string>());
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in);
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : entries()) out.emplace_back(e.key, e.get(cfg));
    return out;
}

std::string to_ini(const RunConfig& cfg) {
    std::ostringstream out;
    std::string section;
    for (const auto& [key, value] : config_entries(cfg)) {
        const auto dot = key.find('.');
        const std::string sec = key.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) out << '\n';
            out << '[' << sec << "]\n";
            section = sec;
        }
        out << key.substr(dot + 1) << " = " << value << '\n';
    }
    return out.str();
}

}  // namespace grocat
