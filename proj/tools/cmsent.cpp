// cmsent: batch command-line front end.
//
//   cmsent preprocess --corpus FILE [--out FILE]
//   cmsent train      --corpus FILE --model FILE [resources] [hyperparameters]
//   cmsent tune       --corpus FILE --model FILE --out REPORT [--grid-config FILE] [resources]
//   cmsent predict    --corpus FILE --model FILE [--out FILE] [resources]
//   cmsent evaluate   --corpus GOLD --predictions FILE [--out JSON]
//
// Exit codes: 0 success, 1 usage/configuration error, 2 data error,
// 3 internal error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cmsent/cmsent.hpp"

namespace {

using namespace cmsent;
namespace fs = std::filesystem;

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_internal = 3 };

// Mirrors the --config JSON file; command-line flags take precedence.
struct RunConfig {
    std::optional<std::string> corpus;
    std::optional<std::string> embeddings;
    std::optional<std::string> lexicon_dir;
    std::optional<std::string> easy_words;
    std::optional<std::string> model;
    std::optional<std::string> out;
    std::optional<std::string> predictions;
    std::optional<std::string> grid_config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> folds;
    std::optional<std::size_t> workers;
    std::optional<double> validation_fraction;
    std::optional<int> syllable_threshold;

    std::optional<std::string> kernel;
    std::optional<double> c;
    std::optional<double> epsilon;
    std::optional<double> gamma;
    std::optional<double> tol;
    std::optional<long long> max_iter;
    std::optional<int> cache_size_mb;
    std::optional<bool> shrinking;
};

template <typename T>
void merge(std::optional<T>& dst, const nlohmann::json& j, const char* key) {
    if (dst || !j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
    }
}

void merge_config_file(RunConfig& cfg, const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config " + path + ": expected a JSON object");
    static const std::vector<std::string> known{
        "corpus", "embeddings", "lexicon_dir", "easy_words", "model", "out", "predictions", "grid_config", "seed",
        "folds", "workers", "validation_fraction", "syllable_threshold", "kernel", "C", "epsilon", "gamma", "tol",
        "max_iter", "cache_size", "shrinking"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("config " + path + ": unknown field '" + key + "'");
    merge(cfg.corpus, j, "corpus");
    merge(cfg.embeddings, j, "embeddings");
    merge(cfg.lexicon_dir, j, "lexicon_dir");
    merge(cfg.easy_words, j, "easy_words");
    merge(cfg.model, j, "model");
    merge(cfg.out, j, "out");
    merge(cfg.predictions, j, "predictions");
    merge(cfg.grid_config, j, "grid_config");
    merge(cfg.seed, j, "seed");
    merge(cfg.folds, j, "folds");
    merge(cfg.workers, j, "workers");
    merge(cfg.validation_fraction, j, "validation_fraction");
    merge(cfg.syllable_threshold, j, "syllable_threshold");
    merge(cfg.kernel, j, "kernel");
    merge(cfg.c, j, "C");
    merge(cfg.epsilon, j, "epsilon");
    merge(cfg.gamma, j, "gamma");
    merge(cfg.tol, j, "tol");
    merge(cfg.max_iter, j, "max_iter");
    merge(cfg.cache_size_mb, j, "cache_size");
    merge(cfg.shrinking, j, "shrinking");
}

template <typename T>
const T& require(const std::optional<T>& v, const char* flag) {
    if (!v) throw ConfigError(std::string("missing required option ") + flag);
    return *v;
}

ResourcePaths resource_paths(const RunConfig& cfg) {
    ResourcePaths p;
    if (cfg.embeddings) p.embeddings = *cfg.embeddings;
    if (cfg.lexicon_dir) p.lexicon_dir = *cfg.lexicon_dir;
    if (cfg.easy_words) p.easy_words = *cfg.easy_words;
    if (cfg.syllable_threshold) p.difficult_syllable_threshold = *cfg.syllable_threshold;
    return p;
}

FeatureResources resources(const RunConfig& cfg) {
    std::vector<std::string> warnings;
    auto res = load_resources(resource_paths(cfg), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return res;
}

SvrHyperParams hyperparams(const RunConfig& cfg) {
    SvrHyperParams p;
    if (cfg.kernel) p.kernel = parse_kernel(*cfg.kernel);
    if (cfg.c) p.c = *cfg.c;
    if (cfg.epsilon) p.epsilon = *cfg.epsilon;
    if (cfg.gamma) p.gamma = *cfg.gamma;
    if (cfg.tol) p.tol = *cfg.tol;
    if (cfg.max_iter) p.max_iter = *cfg.max_iter;
    if (cfg.cache_size_mb) p.cache_size_mb = *cfg.cache_size_mb;
    if (cfg.shrinking) p.shrinking = *cfg.shrinking;
    p.validate();
    return p;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
    if (path)
        write_file_atomic(*path, text);
    else
        std::cout << text;
}

std::string predictions_text(std::span<const CodeMixedInstance> corpus, std::span<const SentimentLabel> labels) {
    std::string out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        out += corpus[i].uid;
        out += '\t';
        out += to_string(labels[i]);
        out += '\n';
    }
    return out;
}

int cmd_preprocess(const RunConfig& cfg) {
    const auto corpus = parse_corpus(require(cfg.corpus, "--corpus"));
    std::string out;
    for (const auto& inst : corpus) {
        const auto doc = clean(inst);
        for (std::size_t i = 0; i < doc.words.size(); ++i) {
            if (i) out += ' ';
            out += doc.words[i];
        }
        out += '\n';
    }
    write_output(cfg.out, out);
    return exit_ok;
}

void print_histogram(std::span<const CodeMixedInstance> corpus) {
    for (const auto& [label, n] : class_histogram(corpus)) std::cout << "  " << to_string(label) << ": " << n << '\n';
}

int cmd_train(const RunConfig& cfg) {
    const auto& model_path = require(cfg.model, "--model");
    auto corpus = parse_corpus(require(cfg.corpus, "--corpus"));
    const auto params = hyperparams(cfg);
    const auto res = resources(cfg);
    const auto hist = class_histogram(corpus);
    if (hist.at(SentimentLabel::negative) + hist.at(SentimentLabel::neutral) + hist.at(SentimentLabel::positive) == 0)
        throw DataError("training corpus has no labeled instances");

    std::vector<CodeMixedInstance> validation;
    const double fraction = cfg.validation_fraction.value_or(0.0);
    if (fraction != 0.0) {
        auto split = split_corpus(corpus, fraction, cfg.seed.value_or(0));
        corpus = std::move(split.train);
        validation = std::move(split.validation);
    }

    auto model = train_pipeline(corpus, res, params);
    model.created_at = utc_timestamp();
    save_model(model_path, model);

    const double train_f1 = macro_f1(labels_of(corpus), predict_labels(model, res, corpus));
    std::cout << "trained on " << corpus.size() << " instances\n";
    print_histogram(corpus);
    std::cout << "vocabulary: " << model.tfidf.size() << "\n"
              << "feature dimension: " << model.svr.dimension << "\n"
              << "support vectors: " << model.svr.support_vectors.size() << "\n"
              << "iterations: " << model.svr.n_iterations << "\n"
              << "converged: " << (model.svr.converged ? "yes" : "NO (iteration cap reached)") << "\n"
              << "training macro-F1: " << format_real(train_f1) << "\n";
    if (!validation.empty()) {
        const double val_f1 = macro_f1(labels_of(validation), predict_labels(model, res, validation));
        std::cout << "validation instances: " << validation.size() << "\n"
                  << "validation macro-F1: " << format_real(val_f1) << "\n";
    }
    std::cout << "model written to " << model_path << "\n";
    return exit_ok;
}

int cmd_tune(const RunConfig& cfg) {
    const auto& model_path = require(cfg.model, "--model");
    const auto& report_path = require(cfg.out, "--out");
    const auto corpus = parse_corpus(require(cfg.corpus, "--corpus"));

    GridConfig grid_cfg;
    if (cfg.grid_config) grid_cfg = parse_grid_config_text(read_file(*cfg.grid_config));
    grid_cfg.grid.base = hyperparams(cfg);
    const auto folds = cfg.folds.value_or(grid_cfg.folds.value_or(3));
    const auto seed = cfg.seed.value_or(grid_cfg.seed.value_or(0));
    const auto workers = cfg.workers.value_or(grid_cfg.workers.value_or(1));
    if (folds < 2) throw ConfigError("--folds must be at least 2");
    if (workers < 1) throw ConfigError("--workers must be at least 1");

    const auto res = resources(cfg);
    const auto data = prepare_training_data(corpus, res);
    auto result = grid_search<FeatureVector>(grid_cfg.grid, data.features, data.labels, folds, seed, workers);

    auto model = make_pipeline_model(data.tfidf, res, std::move(result.model));
    model.created_at = utc_timestamp();

    // Outputs are written only after the whole search succeeded.
    write_file_atomic(report_path, format_cv_table(result.report));
    write_file_atomic(report_path + ".json", report_to_json(result.report).dump(2) + "\n");
    save_model(model_path, model);

    const auto& best = result.report.rows[result.report.best_index];
    std::cout << "evaluated " << result.report.rows.size() << " combinations x " << folds << " folds\n"
              << "best: " << params_string(best.params) << " mean_test_score=" << format_real(best.mean_test_score)
              << "\n";
    for (const auto& row : result.report.rows)
        if (row.failed_folds) std::cerr << "warning: " << params_string(row.params) << ": " << row.first_error << '\n';
    std::cout << "report written to " << report_path << " (+ .json)\nmodel written to " << model_path << "\n";
    return exit_ok;
}

int cmd_predict(const RunConfig& cfg) {
    const auto model = load_model(require(cfg.model, "--model"));
    const auto corpus = parse_corpus(require(cfg.corpus, "--corpus"));
    const auto res = resources(cfg);
    const auto labels = predict_labels(model, res, corpus);
    write_output(cfg.out, predictions_text(corpus, labels));
    return exit_ok;
}

std::vector<std::pair<std::string, SentimentLabel>> parse_predictions(const std::string& path) {
    std::vector<std::pair<std::string, SentimentLabel>> out;
    const auto text = read_file(path);
    const auto lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto line = trim_right(lines[n]);
        if (line.empty()) continue;
        const auto f = split_on(line, '\t');
        if (f.size() != 2 || f[0].empty()) throw ParseError(path, n + 1, "expected '<uid>\\t<label>'");
        const auto label = parse_label(f[1]);
        if (!label) throw ParseError(path, n + 1, "unknown label '" + std::string(f[1]) + "'");
        out.emplace_back(std::string(f[0]), *label);
    }
    return out;
}

int cmd_evaluate(const RunConfig& cfg) {
    const auto gold_corpus = parse_corpus(require(cfg.corpus, "--corpus"));
    const auto predictions = parse_predictions(require(cfg.predictions, "--predictions"));

    std::unordered_map<std::string, SentimentLabel> predicted;
    for (const auto& [uid, label] : predictions)
        if (!predicted.emplace(uid, label).second) throw DataError("duplicate uid '" + uid + "' in predictions");

    std::vector<SentimentLabel> gold, pred;
    for (const auto& inst : gold_corpus) {
        if (!inst.label) throw DataError("gold instance '" + inst.uid + "' has no label");
        auto it = predicted.find(inst.uid);
        if (it == predicted.end()) throw DataError("uid '" + inst.uid + "' has no prediction");
        gold.push_back(*inst.label);
        pred.push_back(it->second);
        predicted.erase(it);
    }
    if (!predicted.empty())
        throw DataError("uid '" + predicted.begin()->first + "' is predicted but absent from the gold corpus");

    const auto rep = report(confusion(gold, pred));
    std::cout << format_report(rep);
    for (auto label : all_labels)
        if (rep[label].undefined)
            std::cerr << "warning: precision or recall undefined for " << to_string(label) << ", scored as 0\n";
    if (cfg.out) write_file_atomic(*cfg.out, report_to_json(rep).dump(2) + "\n");
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Code-mixed (English-Hindi) tweet sentiment classification"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--corpus", cfg.corpus, "Corpus file");
    };
    auto add_resources = [&](CLI::App* sub) {
        sub->add_option("--embeddings", cfg.embeddings, "Word embedding text file");
        sub->add_option("--lexicon-dir", cfg.lexicon_dir, "Directory with humor/hate/offense/sentiment .tsv lexicons");
        sub->add_option("--easy-words", cfg.easy_words, "Easy-word list, one word per line");
        sub->add_option("--syllable-threshold", cfg.syllable_threshold, "Syllables that make a word difficult");
    };
    auto add_hyper = [&](CLI::App* sub) {
        sub->add_option("--kernel", cfg.kernel, "linear or rbf");
        sub->add_option("--C", cfg.c, "Regularization constant");
        sub->add_option("--epsilon", cfg.epsilon, "Tube half-width");
        sub->add_option("--gamma", cfg.gamma, "RBF width");
        sub->add_option("--tol", cfg.tol, "KKT tolerance");
        sub->add_option("--max-iter", cfg.max_iter, "SMO update cap (-1: until converged)");
        sub->add_option("--cache-size", cfg.cache_size_mb, "Kernel cache in MB");
        sub->add_option("--shrinking", cfg.shrinking, "Enable shrinking (true/false)");
    };

    auto* pre = app.add_subcommand("preprocess", "Print each cleaned document on one line");
    add_common(pre);
    pre->add_option("--out", cfg.out, "Output file (default: stdout)");

    auto* train = app.add_subcommand("train", "Fit features and an SVR with fixed hyperparameters");
    add_common(train);
    add_resources(train);
    add_hyper(train);
    train->add_option("--model", cfg.model, "Model file to write");
    train->add_option("--seed", cfg.seed, "Seed for the validation split");
    train->add_option("--validation-fraction", cfg.validation_fraction, "Hold out this fraction (0: none)");

    auto* tune = app.add_subcommand("tune", "Grid search with k-fold cross-validation, then refit");
    add_common(tune);
    add_resources(tune);
    add_hyper(tune);
    tune->add_option("--model", cfg.model, "Model file to write");
    tune->add_option("--grid-config", cfg.grid_config, "JSON grid configuration");
    tune->add_option("--out", cfg.out, "Report file (TSV; JSON written alongside as <out>.json)");
    tune->add_option("--seed", cfg.seed, "Fold shuffling seed");
    tune->add_option("--folds", cfg.folds, "Number of folds");
    tune->add_option("--workers", cfg.workers, "Worker threads");

    auto* pred = app.add_subcommand("predict", "Write uid<TAB>label for every instance");
    add_common(pred);
    add_resources(pred);
    pred->add_option("--model", cfg.model, "Model file");
    pred->add_option("--out", cfg.out, "Predictions file (default: stdout)");

    auto* eval = app.add_subcommand("evaluate", "Score predictions against a labeled corpus");
    add_common(eval);
    eval->add_option("--predictions", cfg.predictions, "Predictions file");
    eval->add_option("--out", cfg.out, "JSON report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (!config_path.empty()) merge_config_file(cfg, config_path);
        if (*pre) return cmd_preprocess(cfg);
        if (*train) return cmd_train(cfg);
        if (*tune) return cmd_tune(cfg);
        if (*pred) return cmd_predict(cfg);
        if (*eval) return cmd_evaluate(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_internal;
}
