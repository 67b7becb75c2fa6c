#pragma once

// End-to-end glue: corpus -> clean documents -> feature vectors -> SVR.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmsent/corpus.hpp"
#include "cmsent/error.hpp"
#include "cmsent/features.hpp"
#include "cmsent/io.hpp"
#include "cmsent/preprocess.hpp"
#include "cmsent/svr.hpp"

namespace cmsent {

// Fingerprints of every external resource a model was fitted with.
struct FeatureFingerprints {
    FileFingerprint embeddings;
    FileFingerprint humor;
    FileFingerprint hate;
    FileFingerprint offense;
    FileFingerprint sentiment;
    FileFingerprint easy_words;

    friend bool operator==(const FeatureFingerprints&, const FeatureFingerprints&) = default;
};

struct ResourcePaths {
    std::optional<std::filesystem::path> embeddings;
    // Directory holding any of humor.tsv, hate.tsv, offense.tsv, sentiment.tsv.
    std::optional<std::filesystem::path> lexicon_dir;
    std::optional<std::filesystem::path> easy_words;
    int difficult_syllable_threshold = 3;
};

struct FeatureResources {
    std::optional<EmbeddingTable> embeddings;
    LexiconSet lexicons;
    ReadabilityConfig readability;
    FeatureFingerprints fingerprints;
};

inline FeatureResources load_resources(const ResourcePaths& paths, std::vector<std::string>* warnings = nullptr) {
    FeatureResources res;
    if (paths.embeddings) {
        res.embeddings = load_embeddings(*paths.embeddings, warnings);
        res.fingerprints.embeddings = FileFingerprint::of_file(*paths.embeddings);
    }
    if (paths.lexicon_dir) {
        if (!std::filesystem::is_directory(*paths.lexicon_dir))
            throw DataError("lexicon directory " + paths.lexicon_dir->string() + " does not exist");
        auto load = [&](LexiconScorer& scorer, FileFingerprint& fp) {
            const auto file = *paths.lexicon_dir / (scorer.name + ".tsv");
            if (!std::filesystem::exists(file)) return;
            scorer = load_lexicon(file, scorer.name, scorer.aggregation);
            fp = FileFingerprint::of_file(file);
        };
        load(res.lexicons.humor, res.fingerprints.humor);
        load(res.lexicons.hate, res.fingerprints.hate);
        load(res.lexicons.offense, res.fingerprints.offense);
        load(res.lexicons.sentiment, res.fingerprints.sentiment);
    }
    if (paths.easy_words) {
        res.readability = load_easy_words(*paths.easy_words);
        res.fingerprints.easy_words = FileFingerprint::of_file(*paths.easy_words);
    }
    res.readability.difficult_syllable_threshold = paths.difficult_syllable_threshold;
    res.readability.validate();
    return res;
}

struct PipelineModel {
    std::string created_at;
    FeatureFingerprints fingerprints;
    int difficult_syllable_threshold = 3;
    std::size_t embedding_dim = 0;
    TfidfModel tfidf;
    SvrModel<FeatureVector> svr;
};

inline std::vector<CleanDocument> clean_all(std::span<const CodeMixedInstance> corpus) {
    std::vector<CleanDocument> docs;
    docs.reserve(corpus.size());
    for (const auto& inst : corpus) docs.push_back(clean(inst));
    return docs;
}

inline std::vector<SentimentLabel> labels_of(std::span<const CodeMixedInstance> corpus) {
    std::vector<SentimentLabel> labels;
    labels.reserve(corpus.size());
    for (const auto& inst : corpus) {
        if (!inst.label) throw DataError("instance '" + inst.uid + "' has no sentiment label");
        labels.push_back(*inst.label);
    }
    return labels;
}

inline std::vector<FeatureVector> featurize(const TfidfModel& tfidf, const FeatureResources& res,
                                            std::span<const CleanDocument> docs) {
    std::vector<FeatureVector> out;
    out.reserve(docs.size());
    const EmbeddingTable* table = res.embeddings ? &*res.embeddings : nullptr;
    for (const auto& doc : docs) out.push_back(assemble(tfidf, table, res.lexicons, res.readability, doc));
    return out;
}

// Refuses resources that differ from the ones the model was fitted with.
inline void check_resources(const PipelineModel& model, const FeatureResources& res) {
    auto check = [](const char* what, const FileFingerprint& expected, const FileFingerprint& actual) {
        if (expected != actual)
            throw DataError(std::string(what) + " fingerprint mismatch: model has " + expected.to_string() +
                            ", supplied " + actual.to_string());
    };
    const auto& want = model.fingerprints;
    const auto& have = res.fingerprints;
    check("embeddings", want.embeddings, have.embeddings);
    check("humor lexicon", want.humor, have.humor);
    check("hate lexicon", want.hate, have.hate);
    check("offense lexicon", want.offense, have.offense);
    check("sentiment lexicon", want.sentiment, have.sentiment);
    check("easy-word list", want.easy_words, have.easy_words);
    if (model.difficult_syllable_threshold != res.readability.difficult_syllable_threshold)
        throw DataError("difficult-word syllable threshold differs from the model's");
}

struct TrainingData {
    TfidfModel tfidf;
    std::vector<FeatureVector> features;
    std::vector<SentimentLabel> labels;
};

// Fits TF-IDF on the labeled corpus and featurizes it.
inline TrainingData prepare_training_data(std::span<const CodeMixedInstance> corpus, const FeatureResources& res) {
    TrainingData data;
    data.labels = labels_of(corpus);
    if (data.labels.empty()) throw DataError("training corpus has no labeled instances");
    const auto docs = clean_all(corpus);
    data.tfidf = fit_tfidf(docs);
    data.features = featurize(data.tfidf, res, docs);
    return data;
}

inline PipelineModel make_pipeline_model(const TfidfModel& tfidf, const FeatureResources& res,
                                         SvrModel<FeatureVector> svr) {
    PipelineModel model;
    model.fingerprints = res.fingerprints;
    model.difficult_syllable_threshold = res.readability.difficult_syllable_threshold;
    model.embedding_dim = res.embeddings ? res.embeddings->dim : 0;
    model.tfidf = tfidf;
    model.svr = std::move(svr);
    return model;
}

inline PipelineModel train_pipeline(std::span<const CodeMixedInstance> corpus, const FeatureResources& res,
                                    const SvrHyperParams& params) {
    auto data = prepare_training_data(corpus, res);
    std::vector<double> y;
    y.reserve(data.labels.size());
    for (auto l : data.labels) y.push_back(encode_label(l));
    auto svr = fit<FeatureVector>(params, data.features, y);
    return make_pipeline_model(data.tfidf, res, std::move(svr));
}

inline std::vector<SentimentLabel> predict_labels(const PipelineModel& model, const FeatureResources& res,
                                                  std::span<const CodeMixedInstance> corpus) {
    check_resources(model, res);
    const auto docs = clean_all(corpus);
    const auto features = featurize(model.tfidf, res, docs);
    std::vector<SentimentLabel> out;
    out.reserve(features.size());
    for (const auto& fv : features) out.push_back(decode_label(predict(model.svr, fv)));
    return out;
}

}  // namespace cmsent
