// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The grocat Contributors

#include "grocat/report.hpp"

#include <cstdio>
#include <sstream>

namespace grocat {

namespace {

using nlohmann::ordered_json;

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string lpad(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(c >= 'a' && c <= 'z' ? c - 'a' + 'A' : c);
    return out;
}

ordered_json metrics_json(const Metrics& m) {
    return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

ordered_json accuracy_json(const std::array<double, 3>& acc) {
    return {{"top_1", acc[0]}, {"top_2", acc[1]}, {"top_3", acc[2]}};
}

std::string product_label(const Product& p) { return p.ean.empty() ? p.name : p.ean; }

}  // namespace

ordered_json config_json(const RunConfig& cfg) {
    ordered_json out = ordered_json::object();
    for (const auto& [key, value] : config_entries(cfg)) out[key] = value;
    return out;
}

ordered_json training_json(const RunConfig& cfg, const PipelineModel& model, std::size_t products) {
    ordered_json out;
    out["command"] = "train";
    out["config"] = config_json(cfg);
    out["classifier"] = std::string(classifier_name(model.kind()));
    out["products"] = products;
    out["varieties"] = model.varieties.size();
    out["vocabulary_size"] = model.vocabulary.size();
    out["stopwords"] = model.stopwords.size();
    if (model.pca) {
        out["pca_components"] = model.pca->output_dim();
        out["retained_variance"] = retained_variance(*model.pca, model.pca->output_dim());
    }
    return out;
}

ordered_json predictions_json(const PipelineModel& model, std::span<const Product> products,
                              std::span<const ProductPrediction> preds) {
    ordered_json out = ordered_json::array();
    for (std::size_t i = 0; i < preds.size(); ++i) {
        ordered_json row;
        row["ean"] = products[i].ean;
        row["name"] = products[i].name;
        row["warning"] = preds[i].out_of_vocabulary ? "no vocabulary words" : "";
        ordered_json top = ordered_json::array();
        for (const auto& e : preds[i].ranking.top(3)) {
            top.push_back({{"variety", model.varieties.name(e.variety)}, {"score", e.score}});
        }
        row["top"] = std::move(top);
        out.push_back(std::move(row));
    }
    return out;
}

std::string predictions_table(const PipelineModel& model, std::span<const Product> products,
                              std::span<const ProductPrediction> preds) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"product", "top_1", "score_1", "top_2", "score_2", "top_3", "score_3", "warning"});
    for (std::size_t i = 0; i < preds.size(); ++i) {
        std::vector<std::string> row{product_label(products[i])};
        const auto top = preds[i].ranking.top(3);
        for (std::size_t t = 0; t < 3; ++t) {
            if (t < top.size()) {
                row.push_back(model.varieties.name(top[t].variety));
                row.push_back(fixed(top[t].score));
            } else {
                row.push_back("-");
                row.push_back("-");
            }
        }
        row.push_back(preds[i].out_of_vocabulary ? "no-vocabulary-words" : "");
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> widths(rows.front().size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            line += pad(row[c], widths[c]);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
    return out.str();
}

ordered_json evaluation_json(const EvaluationRun& run) {
    ordered_json out;
    out["command"] = "evaluate";
    out["config"] = config_json(run.config);
    out["split"] = {{"seed", run.config.split_seed}, {"train", run.train_size}, {"test", run.test_size}};
    ordered_json tables = ordered_json::array();
    for (const auto& t : run.tables) {
        ordered_json table;
        table["classifier"] = std::string(classifier_name(t.classifier));
        ordered_json cols = ordered_json::array();
        for (const auto& c : t.columns) {
            ordered_json col;
            col["pca_components"] = c.pca_components;
            for (std::size_t k = 0; k < 3; ++k) col["top_" + std::to_string(k + 1)] = metrics_json(c.metrics[k]);
            cols.push_back(std::move(col));
        }
        table["columns"] = std::move(cols);
        tables.push_back(std::move(table));
    }
    out["tables"] = std::move(tables);
    return out;
}

std::string evaluation_table(const EvaluationRun& run) {
    std::ostringstream out;
    out << "split seed " << run.config.split_seed << ": " << run.train_size << " train / " << run.test_size
        << " test, " << averaging_name(run.config.averaging) << " averaging, " << topk_rule_name(run.config.topk_rule)
        << " rule\n";
    constexpr std::size_t label_w = 18;
    constexpr std::size_t col_w = 10;
    for (const auto& t : run.tables) {
        out << '\n' << upper(classifier_name(t.classifier)) << '\n';
        std::string header = pad("", label_w);
        for (const auto& c : t.columns) {
            header += lpad(c.pca_components ? "PCA " + std::to_string(c.pca_components) : "words", col_w);
        }
        out << header << '\n';
        const char* names[4] = {"Accuracy", "Precision", "Recall", "F1"};
        for (std::size_t k = 0; k < 3; ++k) {
            for (std::size_t r = 0; r < 4; ++r) {
                std::string line = pad(r == 0 ? "Top_" + std::to_string(k + 1) : "", 7) + pad(names[r], label_w - 7);
                for (const auto& c : t.columns) {
                    const Metrics& m = c.metrics[k];
                    const double v = r == 0 ? m.accuracy : r == 1 ? m.precision : r == 2 ? m.recall : m.f1;
                    line += lpad(fixed(v), col_w);
                }
                out << line << '\n';
            }
        }
    }
    return out.str();
}

ordered_json tuning_json(const TuneRun& run) {
    ordered_json out;
    out["command"] = "tune";
    out["target"] = std::string(tune_target_name(run.target));
    out["config"] = config_json(run.config);
    out["split"] = {{"seed", run.config.split_seed}, {"train", run.train_size}, {"test", run.test_size}};
    ordered_json cells = ordered_json::array();
    ordered_json best = ordered_json::object();
    if (const auto* grid = std::get_if<KnnGrid>(&run.grid)) {
        for (const auto& c : grid->cells) {
            cells.push_back({{"k", c.k}, {"metric", std::string(metric_name(c.metric))}, {"accuracy", accuracy_json(c.accuracy)}});
        }
        for (std::size_t t = 0; t < 3; ++t) {
            const auto& c = grid->cells[grid->best[t]];
            best["top_" + std::to_string(t + 1)] = {{"k", c.k}, {"metric", std::string(metric_name(c.metric))}, {"accuracy", c.accuracy[t]}};
        }
    } else {
        const auto& mlp = std::get<MlpGrid>(run.grid);
        for (const auto& c : mlp.cells) {
            cells.push_back({{"nodes", c.nodes}, {"epochs", c.epochs}, {"accuracy", accuracy_json(c.accuracy)}});
        }
        for (std::size_t t = 0; t < 3; ++t) {
            const auto& c = mlp.cells[mlp.best[t]];
            best["top_" + std::to_string(t + 1)] = {{"nodes", c.nodes}, {"epochs", c.epochs}, {"accuracy", c.accuracy[t]}};
        }
    }
    out["cells"] = std::move(cells);
    out["best"] = std::move(best);
    return out;
}

std::string tuning_table(const TuneRun& run) {
    std::ostringstream out;
    out << "split seed " << run.config.split_seed << ": " << run.train_size << " train / " << run.test_size
        << " test, PCA " << run.config.pca_components << '\n';
    auto acc_cols = [](const std::array<double, 3>& a) {
        return lpad(fixed(a[0]), 8) + lpad(fixed(a[1]), 8) + lpad(fixed(a[2]), 8);
    };
    if (const auto* grid = std::get_if<KnnGrid>(&run.grid)) {
        out << lpad("k", 4) << "  " << pad("metric", 12) << lpad("Top_1", 8) << lpad("Top_2", 8) << lpad("Top_3", 8)
            << '\n';
        for (const auto& c : grid->cells) {
            out << lpad(std::to_string(c.k), 4) << "  " << pad(std::string(metric_name(c.metric)), 12)
                << acc_cols(c.accuracy) << '\n';
        }
        out << '\n';
        for (std::size_t t = 0; t < 3; ++t) {
            const auto& c = grid->cells[grid->best[t]];
            out << "best Top_" << t + 1 << ": k=" << c.k << " metric=" << metric_name(c.metric)
                << " accuracy=" << fixed(c.accuracy[t]) << '\n';
        }
    } else {
        const auto& mlp = std::get<MlpGrid>(run.grid);
        out << lpad("nodes", 6) << lpad("epochs", 8) << lpad("Top_1", 8) << lpad("Top_2", 8) << lpad("Top_3", 8) << '\n';
        for (const auto& c : mlp.cells) {
            out << lpad(std::to_string(c.nodes), 6) << lpad(std::to_string(c.epochs), 8) << acc_cols(c.accuracy) << '\n';
        }
        out << '\n';
        for (std::size_t t = 0; t < 3; ++t) {
            const auto& c = mlp.cells[mlp.best[t]];
            out << "best Top_" << t + 1 << ": nodes=" << c.nodes << " epochs=" << c.epochs
                << " accuracy=" << fixed(c.accuracy[t]) << '\n';
        }
    }
    return out.str();
}

}  // namespace grocat
