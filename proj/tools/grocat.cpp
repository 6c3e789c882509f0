// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors
//
// grocat: train, apply and evaluate grocery variety classifiers.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "grocat/config.hpp"
#include "grocat/errors.hpp"
#include "grocat/evaluate.hpp"
#include "grocat/model_io.hpp"
#include "grocat/pipeline.hpp"
#include "grocat/report.hpp"

namespace {

using namespace grocat;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct ConfigFlags {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::string> vocab_scope;
    bool fold_accents = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "INI configuration file");
        cmd->add_option("--set", overrides, "Override one key, e.g. --set knn.k=7 (repeatable)");
        cmd->add_option("--vocab-scope", vocab_scope, "Vocabulary and PCA rows: train or all")
            ->check(CLI::IsMember({"train", "all"}));
        cmd->add_flag("--fold-accents", fold_accents, "Strip accents before matching words");
    }

    RunConfig resolve() const {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (vocab_scope) cfg.vocab_scope = parse_vocab_scope(*vocab_scope);
        if (fold_accents) cfg.fold_accents = true;
        for (const auto& o : overrides) apply_override(cfg, o);
        cfg.validate();
        return cfg;
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw DataError("write failed for " + path);
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grocat: grocery product variety classification"};
    app.require_subcommand(1);

    // train
    ConfigFlags train_flags;
    std::string train_catalog, train_model_path, train_report;
    std::optional<std::string> train_classifier;
    auto* train = app.add_subcommand("train", "Fit a classifier on a catalog and write a model file");
    train_flags.attach(train);
    train->add_option("--catalog", train_catalog, "Labelled catalog (CSV with header)")->required();
    train->add_option("-o,--model", train_model_path, "Output model file")->required();
    train->add_option("--classifier", train_classifier, "bm25, knn, fknn, gbt or mlp");
    train->add_option("--report", train_report, "Training report (JSON); '-' for stdout");

    // predict
    std::string predict_model, predict_input, predict_text, predict_json;
    std::string predict_format = "table";
    auto* predict = app.add_subcommand("predict", "Rank varieties for new products");
    predict->add_option("-m,--model", predict_model, "Model file")->required();
    auto* input_opt = predict->add_option("--input", predict_input, "Catalog of products (variety column optional)");
    auto* text_opt = predict->add_option("--text", predict_text, "A single product description");
    input_opt->excludes(text_opt);
    predict->add_option("--format", predict_format, "Output on stdout: table or json")
        ->check(CLI::IsMember({"table", "json"}));
    predict->add_option("--json", predict_json, "Also write the JSON report to this file");
    std::string predict_delimiter = ",";
    predict->add_option("--delimiter", predict_delimiter, "Input field delimiter (single character or 'tab')");

    // evaluate
    ConfigFlags eval_flags;
    std::string eval_catalog, eval_json, eval_table;
    std::vector<std::string> eval_classifiers;
    auto* evaluate = app.add_subcommand("evaluate", "Split, train and score classifiers over a PCA sweep");
    eval_flags.attach(evaluate);
    evaluate->add_option("--catalog", eval_catalog, "Labelled catalog")->required();
    evaluate->add_option("--classifier", eval_classifiers, "Classifiers to evaluate (repeatable)");
    evaluate->add_option("--json", eval_json, "JSON report path");
    evaluate->add_option("--table", eval_table, "Table report path (default stdout)");

    // tune
    ConfigFlags tune_flags;
    std::string tune_catalog, tune_target, tune_json, tune_table;
    auto* tune = app.add_subcommand("tune", "Grid search for knn, fknn or mlp");
    tune_flags.attach(tune);
    tune->add_option("--catalog", tune_catalog, "Labelled catalog")->required();
    tune->add_option("--target", tune_target, "knn, fknn or mlp")->required()->check(CLI::IsMember({"knn", "fknn", "mlp"}));
    tune->add_option("--json", tune_json, "JSON report path");
    tune->add_option("--table", tune_table, "Table report path (default stdout)");

    // synth
    SynthConfig synth_cfg;
    std::string synth_out = "-";
    auto* synth = app.add_subcommand("synth", "Generate a synthetic labelled catalog");
    synth->add_option("-o,--out", synth_out, "Output CSV ('-' for stdout)");
    synth->add_option("--varieties", synth_cfg.varieties, "Number of varieties");
    synth->add_option("--products-per-variety", synth_cfg.products_per_variety, "Products per variety");
    synth->add_option("--words-per-signature", synth_cfg.words_per_signature, "Signature words per variety");
    synth->add_option("--noise-vocab", synth_cfg.noise_vocab, "Shared noise vocabulary size");
    synth->add_option("--overlap", synth_cfg.overlap, "Fraction of signature shared with the next variety");
    synth->add_option("--signature-words", synth_cfg.signature_words_per_product, "Signature words per product");
    synth->add_option("--noise-words", synth_cfg.noise_words_per_product, "Noise words per product");
    synth->add_option("--seed", synth_cfg.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*train) {
            RunConfig cfg = train_flags.resolve();
            if (train_classifier) cfg.classifier = parse_classifier(*train_classifier);
            const Catalog catalog = clean_catalog(load_catalog(train_catalog, cfg.format));
            const PipelineModel model = train_model(cfg, catalog);
            save_model(std::filesystem::path(train_model_path), model);
            if (!train_report.empty()) write_text(train_report, dump(training_json(cfg, model, catalog.size())));
        } else if (*predict) {
            const PipelineModel model = load_model(std::filesystem::path(predict_model));
            std::vector<Product> products;
            if (!predict_text.empty()) {
                Product p;
                p.name = predict_text;
                products.push_back(std::move(p));
            } else if (!predict_input.empty()) {
                RunConfig delim;
                set_config_value(delim, "catalog.delimiter", predict_delimiter);
                products = load_products(predict_input, delim.format, false);
            } else {
                throw ConfigError("predict needs --input or --text");
            }
            const auto preds = predict_products(model, products);
            for (std::size_t i = 0; i < preds.size(); ++i) {
                if (preds[i].out_of_vocabulary) {
                    std::cerr << "warning: product " << (i + 1) << " has no vocabulary words\n";
                }
            }
            const auto j = predictions_json(model, products, preds);
            if (!predict_json.empty()) write_text(predict_json, dump(j));
            std::cout << (predict_format == "json" ? dump(j) : predictions_table(model, products, preds));
        } else if (*evaluate) {
            RunConfig cfg = eval_flags.resolve();
            for (const auto& c : eval_classifiers) cfg.evaluate_classifiers.push_back(parse_classifier(c));
            const Catalog catalog = clean_catalog(load_catalog(eval_catalog, cfg.format));
            const EvaluationRun run = run_evaluation(cfg, catalog);
            if (!eval_json.empty()) write_text(eval_json, dump(evaluation_json(run)));
            write_text(eval_table, evaluation_table(run));
        } else if (*tune) {
            const RunConfig cfg = tune_flags.resolve();
            const Catalog catalog = clean_catalog(load_catalog(tune_catalog, cfg.format));
            const TuneRun run = run_tuning(cfg, catalog, parse_tune_target(tune_target));
            if (!tune_json.empty()) write_text(tune_json, dump(tuning_json(run)));
            write_text(tune_table, tuning_table(run));
        } else if (*synth) {
            const Catalog catalog = synth_catalog(synth_cfg);
            std::ostringstream out;
            write_catalog(out, catalog.products, CatalogFormat{});
            write_text(synth_out, out.str());
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
