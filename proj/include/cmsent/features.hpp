#pragma once

// Document featurization.
//
// A FeatureVector has three blocks in a fixed order:
//   [0, V)          TF-IDF weights, sparse, L2-normalized
//   [V, V+d)        mean-pooled word embedding
//   [V+d, V+d+12)   auxiliary scores, laid out as AuxIndex below
// The order and the aux layout are part of the model file format.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cmsent/error.hpp"
#include "cmsent/io.hpp"
#include "cmsent/kernel.hpp"
#include "cmsent/preprocess.hpp"
#include "cmsent/unicode.hpp"

namespace cmsent {

struct SparseEntry {
    std::uint32_t index;
    double value;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Entries sorted by strictly increasing index.
using SparseVector = std::vector<SparseEntry>;

inline constexpr std::size_t aux_size = 12;

enum AuxIndex : std::size_t {
    aux_humor_label = 0,
    aux_humor_score,
    aux_hate,
    aux_offensive,
    aux_senti_min,
    aux_senti_max,
    aux_senti_mean,
    aux_senti_sum,
    aux_pos_count,
    aux_neg_count,
    aux_easy_ratio,
    aux_difficult_ratio,
};

struct FeatureVector {
    SparseVector tfidf;
    std::size_t tfidf_dim = 0;
    std::vector<double> embedding;
    std::array<double, aux_size> aux{};

    std::size_t total_dim() const { return tfidf_dim + embedding.size() + aux_size; }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

template <>
struct SampleTraits<FeatureVector> {
    static std::size_t dimension(const FeatureVector& v) { return v.total_dim(); }

    static double dot(const FeatureVector& a, const FeatureVector& b) {
        double s = 0.0;
        auto i = a.tfidf.begin();
        auto j = b.tfidf.begin();
        while (i != a.tfidf.end() && j != b.tfidf.end()) {
            if (i->index < j->index) {
                ++i;
            } else if (j->index < i->index) {
                ++j;
            } else {
                s += i->value * j->value;
                ++i;
                ++j;
            }
        }
        for (std::size_t k = 0; k < a.embedding.size(); ++k) s += a.embedding[k] * b.embedding[k];
        for (std::size_t k = 0; k < aux_size; ++k) s += a.aux[k] * b.aux[k];
        return s;
    }

    static double squared_distance(const FeatureVector& a, const FeatureVector& b) {
        double s = 0.0;
        auto i = a.tfidf.begin();
        auto j = b.tfidf.begin();
        while (i != a.tfidf.end() || j != b.tfidf.end()) {
            double d;
            if (j == b.tfidf.end() || (i != a.tfidf.end() && i->index < j->index)) {
                d = i->value;
                ++i;
            } else if (i == a.tfidf.end() || j->index < i->index) {
                d = j->value;
                ++j;
            } else {
                d = i->value - j->value;
                ++i;
                ++j;
            }
            s += d * d;
        }
        for (std::size_t k = 0; k < a.embedding.size(); ++k) {
            const double d = a.embedding[k] - b.embedding[k];
            s += d * d;
        }
        for (std::size_t k = 0; k < aux_size; ++k) {
            const double d = a.aux[k] - b.aux[k];
            s += d * d;
        }
        return s;
    }
};

// ---------------------------------------------------------------------------
// TF-IDF

// Vocabulary sorted lexicographically (byte order); idf[i] belongs to
// vocabulary[i] and equals ln((1 + n_docs) / (1 + df)) + 1.
class TfidfModel {
public:
    TfidfModel() = default;

    TfidfModel(std::vector<std::string> vocabulary, std::vector<double> idf, std::size_t n_docs)
        : vocabulary_(std::move(vocabulary)), idf_(std::move(idf)), n_docs_(n_docs) {
        if (vocabulary_.size() != idf_.size()) throw DataError("tfidf: vocabulary and idf sizes differ");
        for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
            if (i > 0 && !(vocabulary_[i - 1] < vocabulary_[i]))
                throw DataError("tfidf: vocabulary not sorted and unique at '" + vocabulary_[i] + "'");
            if (!(std::isfinite(idf_[i]) && idf_[i] > 0.0)) throw DataError("tfidf: idf must be positive and finite");
            index_.emplace(vocabulary_[i], static_cast<std::uint32_t>(i));
        }
    }

    std::size_t size() const { return vocabulary_.size(); }
    std::size_t n_docs() const { return n_docs_; }
    const std::vector<std::string>& vocabulary() const { return vocabulary_; }
    const std::vector<double>& idf() const { return idf_; }

    std::optional<std::uint32_t> index_of(const std::string& word) const {
        auto it = index_.find(word);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    double idf_of(const std::string& word) const {
        auto i = index_of(word);
        if (!i) throw DataError("tfidf: '" + word + "' not in vocabulary");
        return idf_[*i];
    }

private:
    std::vector<std::string> vocabulary_;
    std::vector<double> idf_;
    std::size_t n_docs_ = 0;
    std::unordered_map<std::string, std::uint32_t> index_;
};

inline TfidfModel fit_tfidf(std::span<const CleanDocument> docs) {
    if (docs.empty()) throw DataError("tfidf: no documents to fit");
    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::unordered_set<std::string_view> seen;
        for (const auto& w : doc.words)
            if (seen.insert(w).second) ++df[w];
    }
    if (df.empty()) throw DataError("tfidf: every document is empty (empty vocabulary)");

    const auto n = static_cast<double>(docs.size());
    std::vector<std::string> vocabulary;
    std::vector<double> idf;
    vocabulary.reserve(df.size());
    idf.reserve(df.size());
    for (const auto& [word, count] : df) {
        vocabulary.push_back(word);
        idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return {std::move(vocabulary), std::move(idf), docs.size()};
}

// Raw counts times idf, L2-normalized; out-of-vocabulary words are ignored.
inline SparseVector transform_tfidf(const TfidfModel& model, const CleanDocument& doc) {
    std::map<std::uint32_t, double> counts;
    for (const auto& w : doc.words)
        if (auto i = model.index_of(w)) counts[*i] += 1.0;
    SparseVector out;
    out.reserve(counts.size());
    double norm2 = 0.0;
    for (const auto& [i, c] : counts) {
        const double v = c * model.idf()[i];
        out.push_back({i, v});
        norm2 += v * v;
    }
    if (norm2 > 0.0) {
        const double norm = std::sqrt(norm2);
        for (auto& e : out) e.value /= norm;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Embeddings

struct EmbeddingTable {
    std::size_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;
};

// `word v1 ... vd` per line. dim comes from the first line; a repeated word
// keeps its last vector and adds a warning.
inline EmbeddingTable parse_embeddings_text(std::string_view text, const std::string& source,
                                            std::vector<std::string>* warnings = nullptr) {
    EmbeddingTable table;
    const auto lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto lineno = n + 1;
        const auto line = trim_right(lines[n]);
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
            const auto start = pos;
            while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
            if (pos > start) fields.push_back(line.substr(start, pos - start));
        }
        if (fields.size() < 2) throw ParseError(source, lineno, "expected a word followed by at least one value");
        const auto d = fields.size() - 1;
        if (table.dim == 0) table.dim = d;
        if (d != table.dim)
            throw ParseError(source, lineno,
                             "expected " + std::to_string(table.dim) + " components, found " + std::to_string(d));
        std::vector<double> vec(d);
        for (std::size_t k = 0; k < d; ++k)
            if (!parse_real(fields[k + 1], vec[k]))
                throw ParseError(source, lineno, "non-numeric component '" + std::string(fields[k + 1]) + "'");
        auto word = unicode::to_lower(fields[0]);
        auto [it, inserted] = table.vectors.insert_or_assign(std::move(word), std::move(vec));
        if (!inserted && warnings)
            warnings->push_back(source + ":" + std::to_string(lineno) + ": duplicate word '" + it->first +
                                "', keeping the later vector");
    }
    if (table.vectors.empty()) throw DataError(source + ": embedding file is empty");
    return table;
}

inline EmbeddingTable load_embeddings(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr) {
    return parse_embeddings_text(read_file(path), path.string(), warnings);
}

// Mean of the vectors of in-table word occurrences; zeros when none match.
inline std::vector<double> pool_embedding(const EmbeddingTable& table, const CleanDocument& doc) {
    std::vector<double> sum(table.dim, 0.0);
    std::size_t matched = 0;
    for (const auto& w : doc.words) {
        auto it = table.vectors.find(w);
        if (it == table.vectors.end()) continue;
        for (std::size_t k = 0; k < table.dim; ++k) sum[k] += it->second[k];
        ++matched;
    }
    if (matched > 0)
        for (auto& v : sum) v /= static_cast<double>(matched);
    return sum;
}

// ---------------------------------------------------------------------------
// Lexicon scorers

enum class Aggregation { binary_label_and_score, per_word_stats };

struct LexiconScorer {
    std::string name;
    std::unordered_map<std::string, double> word_scores;
    Aggregation aggregation = Aggregation::binary_label_and_score;

    // Word scores must lie in [0, 1] for label scorers, [-1, 1] for sentiment.
    void validate() const {
        const double lo = aggregation == Aggregation::per_word_stats ? -1.0 : 0.0;
        for (const auto& [w, s] : word_scores)
            if (!(s >= lo && s <= 1.0))
                throw DataError("lexicon '" + name + "': score for '" + w + "' out of range");
    }

    double score_of(const std::string& word) const {
        auto it = word_scores.find(word);
        return it == word_scores.end() ? 0.0 : it->second;
    }
};

// `word<TAB>score` per line; keys are lowercased to match cleaned text.
inline LexiconScorer parse_lexicon_text(std::string_view text, const std::string& source, std::string name,
                                        Aggregation aggregation) {
    LexiconScorer scorer{std::move(name), {}, aggregation};
    const auto lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto line = trim_right(lines[n]);
        if (line.empty()) continue;
        const auto fields = split_on(line, '\t');
        if (fields.size() != 2 || fields[0].empty())
            throw ParseError(source, n + 1, "expected '<word>\\t<score>'");
        double score = 0.0;
        if (!parse_real(fields[1], score))
            throw ParseError(source, n + 1, "bad score '" + std::string(fields[1]) + "'");
        const double lo = aggregation == Aggregation::per_word_stats ? -1.0 : 0.0;
        if (score < lo || score > 1.0) throw ParseError(source, n + 1, "score out of range");
        scorer.word_scores.insert_or_assign(unicode::to_lower(fields[0]), score);
    }
    return scorer;
}

inline LexiconScorer load_lexicon(const std::filesystem::path& path, std::string name, Aggregation aggregation) {
    return parse_lexicon_text(read_file(path), path.string(), std::move(name), aggregation);
}

struct LexiconSet {
    LexiconScorer humor{"humor", {}, Aggregation::binary_label_and_score};
    LexiconScorer hate{"hate", {}, Aggregation::binary_label_and_score};
    LexiconScorer offense{"offense", {}, Aggregation::binary_label_and_score};
    LexiconScorer sentiment{"sentiment", {}, Aggregation::per_word_stats};
};

inline constexpr double label_threshold = 0.5;

// clamp(sum of matched scores / word count, 0, 1); 0 for an empty document.
inline double normalized_match_score(const LexiconScorer& scorer, const CleanDocument& doc) {
    if (doc.words.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& w : doc.words) sum += scorer.score_of(w);
    return std::clamp(sum / static_cast<double>(doc.words.size()), 0.0, 1.0);
}

struct HumorScore {
    int label = 0;
    double score = 0.0;
};

inline HumorScore score_humor(const LexiconScorer& scorer, const CleanDocument& doc) {
    const double s = normalized_match_score(scorer, doc);
    return {s >= label_threshold ? 1 : 0, s};
}

struct HateOffense {
    int hate = 0;
    int offensive = 0;
};

inline HateOffense score_hate_offense(const LexiconScorer& hate, const LexiconScorer& offense,
                                      const CleanDocument& doc) {
    return {normalized_match_score(hate, doc) >= label_threshold ? 1 : 0,
            normalized_match_score(offense, doc) >= label_threshold ? 1 : 0};
}

struct SentimentStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double sum = 0.0;
    std::size_t pos_count = 0;
    std::size_t neg_count = 0;
};

// Statistics of the per-word score list; unmatched words score 0.
inline SentimentStats wordwise_sentiment_stats(const LexiconScorer& scorer, const CleanDocument& doc) {
    SentimentStats st;
    if (doc.words.empty()) return st;
    st.min = std::numeric_limits<double>::infinity();
    st.max = -std::numeric_limits<double>::infinity();
    for (const auto& w : doc.words) {
        const double s = scorer.score_of(w);
        st.min = std::min(st.min, s);
        st.max = std::max(st.max, s);
        st.sum += s;
        if (s > 0.0) ++st.pos_count;
        if (s < 0.0) ++st.neg_count;
    }
    st.mean = std::clamp(st.sum / static_cast<double>(doc.words.size()), st.min, st.max);
    return st;
}

// ---------------------------------------------------------------------------
// Readability

// Maximal runs of [aeiouy]; a final 'e' after a consonant is silent when
// more than one run was counted. Never less than 1.
inline int count_syllables(std::string_view word) {
    auto is_vowel = [](char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    int runs = 0;
    bool prev_vowel = false;
    for (char c : word) {
        const bool v = is_vowel(c);
        if (v && !prev_vowel) ++runs;
        prev_vowel = v;
    }
    if (word.size() >= 2 && word.back() == 'e' && runs > 1) {
        const char before = word[word.size() - 2];
        const bool consonant = before >= 'a' && before <= 'z' && !is_vowel(before);
        if (consonant) --runs;
    }
    return std::max(runs, 1);
}

struct ReadabilityConfig {
    std::unordered_set<std::string> easy_words;
    int difficult_syllable_threshold = 3;

    void validate() const {
        if (difficult_syllable_threshold < 1) throw ConfigError("difficult-word syllable threshold must be >= 1");
    }
};

inline ReadabilityConfig parse_easy_words_text(std::string_view text, const std::string& source) {
    ReadabilityConfig config;
    for (auto line : split_lines(text)) {
        line = trim_right(line);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
        if (!line.empty()) config.easy_words.insert(unicode::to_lower(line));
    }
    if (config.easy_words.empty()) throw DataError(source + ": easy-word list is empty");
    return config;
}

inline ReadabilityConfig load_easy_words(const std::filesystem::path& path) {
    return parse_easy_words_text(read_file(path), path.string());
}

struct ReadabilityCounts {
    std::size_t easy = 0;
    std::size_t difficult = 0;
    double easy_ratio = 0.0;
    double difficult_ratio = 0.0;
};

inline ReadabilityCounts readability_counts(const ReadabilityConfig& config, const CleanDocument& doc) {
    config.validate();
    ReadabilityCounts rc;
    for (const auto& w : doc.words) {
        const bool difficult =
            !config.easy_words.contains(w) && count_syllables(w) >= config.difficult_syllable_threshold;
        ++(difficult ? rc.difficult : rc.easy);
    }
    if (!doc.words.empty()) {
        const auto n = static_cast<double>(doc.words.size());
        rc.easy_ratio = static_cast<double>(rc.easy) / n;
        rc.difficult_ratio = static_cast<double>(rc.difficult) / n;
    }
    return rc;
}

// ---------------------------------------------------------------------------

inline std::array<double, aux_size> aux_features(const LexiconSet& lexicons, const ReadabilityConfig& config,
                                                 const CleanDocument& doc) {
    std::array<double, aux_size> aux{};
    const auto humor = score_humor(lexicons.humor, doc);
    const auto ho = score_hate_offense(lexicons.hate, lexicons.offense, doc);
    const auto st = wordwise_sentiment_stats(lexicons.sentiment, doc);
    const auto rc = readability_counts(config, doc);
    aux[aux_humor_label] = humor.label;
    aux[aux_humor_score] = humor.score;
    aux[aux_hate] = ho.hate;
    aux[aux_offensive] = ho.offensive;
    aux[aux_senti_min] = st.min;
    aux[aux_senti_max] = st.max;
    aux[aux_senti_mean] = st.mean;
    aux[aux_senti_sum] = st.sum;
    aux[aux_pos_count] = static_cast<double>(st.pos_count);
    aux[aux_neg_count] = static_cast<double>(st.neg_count);
    aux[aux_easy_ratio] = rc.easy_ratio;
    aux[aux_difficult_ratio] = rc.difficult_ratio;
    return aux;
}

// `embeddings` may be null, in which case the embedding block is empty.
inline FeatureVector assemble(const TfidfModel& tfidf, const EmbeddingTable* embeddings, const LexiconSet& lexicons,
                              const ReadabilityConfig& config, const CleanDocument& doc) {
    FeatureVector fv;
    fv.tfidf = transform_tfidf(tfidf, doc);
    fv.tfidf_dim = tfidf.size();
    if (embeddings) fv.embedding = pool_embedding(*embeddings, doc);
    fv.aux = aux_features(lexicons, config, doc);
    return fv;
}

}  // namespace cmsent
