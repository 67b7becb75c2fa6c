#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cmsent/features.hpp"
#include "support/generators.hpp"

using namespace cmsent;

namespace {

CleanDocument doc(std::vector<std::string> words) { return {std::move(words), "d"}; }

LexiconScorer scorer(std::map<std::string, double> scores, Aggregation agg = Aggregation::binary_label_and_score) {
    LexiconScorer s{"test", {}, agg};
    for (auto& [w, v] : scores) s.word_scores[w] = v;
    return s;
}

double norm(const SparseVector& v) {
    double s = 0.0;
    for (const auto& e : v) s += e.value * e.value;
    return std::sqrt(s);
}

// Dense TF-IDF straight from the definition, for comparison.
std::vector<double> reference_tfidf(const std::vector<CleanDocument>& corpus, const CleanDocument& d,
                                    std::vector<std::string>& vocab) {
    std::map<std::string, int> df;
    for (const auto& c : corpus) {
        std::vector<std::string> uniq = c.words;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (const auto& w : uniq) ++df[w];
    }
    vocab.clear();
    for (const auto& [w, n] : df) vocab.push_back(w);
    std::vector<double> out(vocab.size(), 0.0);
    const double n_docs = static_cast<double>(corpus.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        const double tf = static_cast<double>(std::count(d.words.begin(), d.words.end(), vocab[i]));
        out[i] = tf * (std::log((1.0 + n_docs) / (1.0 + df[vocab[i]])) + 1.0);
    }
    double s = 0.0;
    for (double v : out) s += v * v;
    if (s > 0)
        for (double& v : out) v /= std::sqrt(s);
    return out;
}

}  // namespace

TEST(Tfidf, IdfOfUbiquitousTermIsOne) {
    const std::vector<CleanDocument> docs{doc({"a"}), doc({"a"})};
    EXPECT_DOUBLE_EQ(fit_tfidf(docs).idf_of("a"), 1.0);
}

TEST(Tfidf, TwoDocumentFixture) {
    const std::vector<CleanDocument> docs{doc({"cat", "sat"}), doc({"cat", "ran"})};
    const auto m = fit_tfidf(docs);
    EXPECT_EQ(m.vocabulary(), (std::vector<std::string>{"cat", "ran", "sat"}));
    EXPECT_EQ(m.index_of("cat"), 0u);
    EXPECT_EQ(m.index_of("ran"), 1u);
    EXPECT_EQ(m.index_of("sat"), 2u);
    EXPECT_EQ(m.n_docs(), 2u);
    EXPECT_NEAR(m.idf_of("sat"), 1.405465, 1e-6);
    EXPECT_NEAR(m.idf_of("sat"), std::log(1.5) + 1.0, 1e-15);

    const auto v = transform_tfidf(m, doc({"cat", "sat"}));
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].index, 0u);
    EXPECT_EQ(v[1].index, 2u);
    EXPECT_NEAR(v[0].value, 0.5797, 1e-4);
    EXPECT_NEAR(v[1].value, 0.8148, 1e-4);
    const double pre = std::log(1.5) + 1.0;
    EXPECT_NEAR(v[0].value, 1.0 / std::hypot(1.0, pre), 1e-12);
}

TEST(Tfidf, OutOfVocabularyAndSingleWord) {
    const std::vector<CleanDocument> docs{doc({"cat", "sat"}), doc({"cat", "ran"})};
    const auto m = fit_tfidf(docs);
    EXPECT_TRUE(transform_tfidf(m, doc({"dog", "bird"})).empty());
    EXPECT_TRUE(transform_tfidf(m, doc({})).empty());
    const auto v = transform_tfidf(m, doc({"cat"}));
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].value, 1.0);
}

TEST(Tfidf, Errors) {
    EXPECT_THROW(fit_tfidf(std::vector<CleanDocument>{}), DataError);
    EXPECT_THROW(fit_tfidf(std::vector<CleanDocument>{doc({}), doc({})}), DataError);
    EXPECT_THROW(TfidfModel({"b", "a"}, {1.0, 1.0}, 2), DataError);
    EXPECT_THROW(TfidfModel({"a"}, {0.0}, 2), DataError);
}

TEST(Tfidf, MatchesDenseReferenceAndNormProperty) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto corpus = cmsent::testing::random_documents(rng, 20, 15, 8);
        bool any = false;
        for (const auto& d : corpus) any = any || !d.words.empty();
        if (!any) continue;
        const auto m = fit_tfidf(corpus);
        for (const auto& d : cmsent::testing::random_documents(rng, 10, 25, 8)) {
            std::vector<std::string> vocab;
            const auto ref = reference_tfidf(corpus, d, vocab);
            ASSERT_EQ(vocab, m.vocabulary());
            std::vector<double> dense(vocab.size(), 0.0);
            const auto v = transform_tfidf(m, d);
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (k) EXPECT_LT(v[k - 1].index, v[k].index);
                dense[v[k].index] = v[k].value;
            }
            for (std::size_t i = 0; i < dense.size(); ++i) EXPECT_NEAR(dense[i], ref[i], 1e-12);
            const double n = norm(v);
            EXPECT_TRUE(std::abs(n) <= 1e-12 || std::abs(n - 1.0) <= 1e-12) << n;
        }
    }
}

TEST(Tfidf, IdfMonotonicInDocumentFrequency) {
    std::mt19937_64 rng(5);
    const auto corpus = cmsent::testing::random_documents(rng, 60, 30, 6);
    const auto m = fit_tfidf(corpus);
    std::map<std::string, int> df;
    for (const auto& d : corpus) {
        auto w = d.words;
        std::sort(w.begin(), w.end());
        w.erase(std::unique(w.begin(), w.end()), w.end());
        for (const auto& x : w) ++df[x];
    }
    for (const auto& [a, da] : df)
        for (const auto& [b, db] : df)
            if (da < db) EXPECT_GT(m.idf_of(a), m.idf_of(b));
}

TEST(Embeddings, ParseAndErrors) {
    const auto t = parse_embeddings_text("alpha 1 2 3\nBeta 4 5 6\n", "emb");
    EXPECT_EQ(t.dim, 3u);
    EXPECT_EQ(t.vectors.size(), 2u);
    EXPECT_EQ(t.vectors.at("beta"), (std::vector<double>{4, 5, 6}));

    try {
        parse_embeddings_text("a 1 2 3\nb 1 2 3 4\n", "emb");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_embeddings_text("a 1 x 3\n", "emb"), ParseError);
    EXPECT_THROW(parse_embeddings_text("a 1 nan 3\n", "emb"), ParseError);
    EXPECT_THROW(parse_embeddings_text("", "emb"), DataError);
    EXPECT_THROW(parse_embeddings_text("a\n", "emb"), ParseError);
}

TEST(Embeddings, DuplicateWordLastWinsWithWarning) {
    std::vector<std::string> warnings;
    const auto t = parse_embeddings_text("a 1 1\nb 2 2\na 3 3\n", "emb", &warnings);
    EXPECT_EQ(t.vectors.at("a"), (std::vector<double>{3, 3}));
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find(":3"), std::string::npos);
}

TEST(Embeddings, Pooling) {
    EmbeddingTable t;
    t.dim = 2;
    t.vectors["u"] = {1, 0};
    t.vectors["v"] = {0, 1};
    EXPECT_EQ(pool_embedding(t, doc({"u"})), (std::vector<double>{1, 0}));
    EXPECT_EQ(pool_embedding(t, doc({"zz", "yy"})), (std::vector<double>{0, 0}));
    EXPECT_EQ(pool_embedding(t, doc({})), (std::vector<double>{0, 0}));
    EXPECT_EQ(pool_embedding(t, doc({"u", "v"})), (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(pool_embedding(t, doc({"u", "oov", "v"})), (std::vector<double>{0.5, 0.5}));
}

TEST(Embeddings, PoolingIsOrderInvariant) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    EmbeddingTable t;
    t.dim = 4;
    for (int i = 0; i < 10; ++i) t.vectors["w" + std::to_string(i)] = {g(rng), g(rng), g(rng), g(rng)};
    for (auto d : cmsent::testing::random_documents(rng, 50, 14, 9)) {
        const auto base = pool_embedding(t, d);
        std::shuffle(d.words.begin(), d.words.end(), rng);
        const auto shuffled = pool_embedding(t, d);
        for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(base[k], shuffled[k], 1e-12);
    }
}

TEST(Lexicons, HumorScoring) {
    const auto s = scorer({{"lol", 0.6}, {"haha", 0.6}, {"joke", 1.0}});
    auto r = score_humor(s, doc({}));
    EXPECT_EQ(r.label, 0);
    EXPECT_EQ(r.score, 0.0);
    r = score_humor(s, doc({"joke", "joke"}));
    EXPECT_EQ(r.label, 1);
    EXPECT_EQ(r.score, 1.0);
    r = score_humor(s, doc({"lol", "haha", "x", "y"}));
    EXPECT_EQ(r.label, 0);
    EXPECT_NEAR(r.score, 0.3, 1e-15);
    r = score_humor(s, doc({"joke", "y"}));
    EXPECT_EQ(r.label, 1);
}

TEST(Lexicons, HateOffense) {
    const auto hate = scorer({{"h1", 1.0}, {"h2", 0.8}});
    const auto off = scorer({{"o1", 1.0}, {"h2", 0.4}});
    auto r = score_hate_offense(hate, off, doc({"nice", "day"}));
    EXPECT_EQ(r.hate, 0);
    EXPECT_EQ(r.offensive, 0);
    r = score_hate_offense(hate, off, doc({"h1", "h2"}));
    EXPECT_EQ(r.hate, 1);
    r = score_hate_offense(hate, off, doc({"h2", "o1", "a", "b", "c"}));
    EXPECT_EQ(r.hate, 0);
    EXPECT_EQ(r.offensive, 0);
}

TEST(Lexicons, SentimentStats) {
    const auto s = scorer({{"good", 0.5}, {"bad", -0.5}, {"ok", 0.2}, {"meh", -0.1}}, Aggregation::per_word_stats);
    auto st = wordwise_sentiment_stats(s, doc({"good", "bad"}));
    EXPECT_EQ(st.min, -0.5);
    EXPECT_EQ(st.max, 0.5);
    EXPECT_EQ(st.mean, 0.0);
    EXPECT_EQ(st.sum, 0.0);
    EXPECT_EQ(st.pos_count, 1u);
    EXPECT_EQ(st.neg_count, 1u);

    st = wordwise_sentiment_stats(s, doc({}));
    EXPECT_EQ(st.min, 0.0);
    EXPECT_EQ(st.max, 0.0);
    EXPECT_EQ(st.mean, 0.0);
    EXPECT_EQ(st.sum, 0.0);
    EXPECT_EQ(st.pos_count + st.neg_count, 0u);

    st = wordwise_sentiment_stats(s, doc({"ok", "ok", "meh"}));
    EXPECT_NEAR(st.min, -0.1, 1e-15);
    EXPECT_NEAR(st.max, 0.2, 1e-15);
    EXPECT_NEAR(st.mean, 0.1, 1e-15);
    EXPECT_NEAR(st.sum, 0.3, 1e-15);
    EXPECT_EQ(st.pos_count, 2u);
    EXPECT_EQ(st.neg_count, 1u);

    st = wordwise_sentiment_stats(s, doc({"unknown", "good"}));
    EXPECT_EQ(st.min, 0.0);
    EXPECT_EQ(st.pos_count, 1u);
}

TEST(Lexicons, ParseLexicon) {
    const auto s = parse_lexicon_text("Lol\t0.7\n\nhaha\t1\n", "lex", "humor", Aggregation::binary_label_and_score);
    EXPECT_EQ(s.word_scores.size(), 2u);
    EXPECT_EQ(s.score_of("lol"), 0.7);
    EXPECT_THROW(parse_lexicon_text("a\t1.5\n", "lex", "humor", Aggregation::binary_label_and_score), ParseError);
    EXPECT_THROW(parse_lexicon_text("a\t-0.5\n", "lex", "humor", Aggregation::binary_label_and_score), ParseError);
    EXPECT_NO_THROW(parse_lexicon_text("a\t-0.5\n", "lex", "senti", Aggregation::per_word_stats));
    EXPECT_THROW(parse_lexicon_text("a 0.5\n", "lex", "senti", Aggregation::per_word_stats), ParseError);
    EXPECT_THROW(parse_lexicon_text("a\tzero\n", "lex", "senti", Aggregation::per_word_stats), ParseError);
}

TEST(Readability, Syllables) {
    EXPECT_EQ(count_syllables("cat"), 1);
    EXPECT_EQ(count_syllables("because"), 2);
    EXPECT_EQ(count_syllables("rhythm"), 1);
    EXPECT_EQ(count_syllables("extraordinary"), 5);
    EXPECT_EQ(count_syllables("the"), 1);
    EXPECT_EQ(count_syllables("tree"), 1);
    EXPECT_EQ(count_syllables("brr"), 1);
    EXPECT_EQ(count_syllables("beautiful"), 3);
}

TEST(Readability, Counts) {
    ReadabilityConfig easy;
    easy.easy_words = {"banana", "a", "is"};
    auto rc = readability_counts(easy, doc({"banana", "is", "a"}));
    EXPECT_EQ(rc.easy, 3u);
    EXPECT_EQ(rc.difficult, 0u);
    EXPECT_EQ(rc.easy_ratio, 1.0);
    EXPECT_EQ(rc.difficult_ratio, 0.0);

    rc = readability_counts(easy, doc({}));
    EXPECT_EQ(rc.easy + rc.difficult, 0u);
    EXPECT_EQ(rc.easy_ratio, 0.0);

    const ReadabilityConfig none;
    rc = readability_counts(none, doc({"extraordinary"}));
    EXPECT_EQ(rc.easy, 0u);
    EXPECT_EQ(rc.difficult, 1u);
    EXPECT_EQ(rc.easy_ratio, 0.0);
    EXPECT_EQ(rc.difficult_ratio, 1.0);

    ReadabilityConfig bad;
    bad.difficult_syllable_threshold = 0;
    EXPECT_THROW(readability_counts(bad, doc({"x"})), ConfigError);
    EXPECT_THROW(parse_easy_words_text("\n  \n", "easy"), DataError);
    EXPECT_EQ(parse_easy_words_text("The\n a \n", "easy").easy_words.size(), 2u);
}

TEST(Assemble, DimensionsAndBlocks) {
    const std::vector<CleanDocument> corpus{doc({"good", "day"}), doc({"bad", "day"}), doc({"joke"})};
    const auto m = fit_tfidf(corpus);
    EmbeddingTable t;
    t.dim = 2;
    t.vectors["good"] = {1, 2};
    t.vectors["day"] = {3, 4};
    LexiconSet lex;
    lex.humor = scorer({{"joke", 1.0}});
    lex.hate = scorer({{"bad", 1.0}});
    lex.offense = scorer({{"bad", 0.5}});
    lex.sentiment = scorer({{"good", 0.8}, {"bad", -0.6}}, Aggregation::per_word_stats);
    ReadabilityConfig rc;
    rc.easy_words = {"day"};

    const auto d = doc({"good", "day", "extraordinary"});
    const auto fv = assemble(m, &t, lex, rc, d);
    EXPECT_EQ(fv.total_dim(), m.size() + 2 + 12);
    EXPECT_EQ(fv.tfidf, transform_tfidf(m, d));
    EXPECT_EQ(fv.embedding, pool_embedding(t, d));
    const auto h = score_humor(lex.humor, d);
    const auto ho = score_hate_offense(lex.hate, lex.offense, d);
    const auto st = wordwise_sentiment_stats(lex.sentiment, d);
    const auto r = readability_counts(rc, d);
    const std::array<double, 12> expected{
        double(h.label), h.score, double(ho.hate), double(ho.offensive), st.min, st.max, st.mean, st.sum,
        double(st.pos_count), double(st.neg_count), r.easy_ratio, r.difficult_ratio};
    EXPECT_EQ(fv.aux, expected);
    EXPECT_NEAR(fv.aux[aux_difficult_ratio], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(fv.aux[aux_senti_sum], 0.8, 1e-15);

    const auto empty = assemble(m, &t, lex, rc, doc({}));
    EXPECT_TRUE(empty.tfidf.empty());
    EXPECT_EQ(empty.embedding, (std::vector<double>{0, 0}));
    for (double a : empty.aux) EXPECT_EQ(a, 0.0);

    const auto no_emb = assemble(m, nullptr, lex, rc, d);
    EXPECT_EQ(no_emb.total_dim(), m.size() + 12);
}

TEST(Assemble, AuxBoundsProperty) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1), p(0, 1);
    LexiconSet lex;
    for (int i = 0; i < 12; ++i) {
        const auto w = "w" + std::to_string(i);
        lex.humor.word_scores[w] = p(rng);
        lex.hate.word_scores[w] = p(rng);
        lex.offense.word_scores[w] = p(rng);
        lex.sentiment.word_scores[w] = u(rng);
    }
    ReadabilityConfig rc;
    rc.easy_words = {"w1", "w2"};
    for (const auto& d : cmsent::testing::random_documents(rng, 300, 20, 10)) {
        const auto a = aux_features(lex, rc, d);
        for (auto i : {aux_humor_label, aux_hate, aux_offensive}) EXPECT_TRUE(a[i] == 0.0 || a[i] == 1.0);
        for (auto i : {aux_humor_score, aux_easy_ratio, aux_difficult_ratio}) {
            EXPECT_GE(a[i], 0.0);
            EXPECT_LE(a[i], 1.0);
        }
        EXPECT_LE(a[aux_senti_min], a[aux_senti_mean]);
        EXPECT_LE(a[aux_senti_mean], a[aux_senti_max]);
        if (!d.words.empty()) EXPECT_NEAR(a[aux_easy_ratio] + a[aux_difficult_ratio], 1.0, 1e-12);
        EXPECT_EQ(a, aux_features(lex, rc, d));
    }
}

TEST(FeatureVectorKernel, SparseDotAndDistanceMatchDense) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1, 1);
    auto random_fv = [&](std::size_t v) {
        FeatureVector fv;
        fv.tfidf_dim = v;
        for (std::uint32_t i = 0; i < v; ++i)
            if (rng() % 3 == 0) fv.tfidf.push_back({i, u(rng)});
        fv.embedding = {u(rng), u(rng)};
        for (auto& a : fv.aux) a = u(rng);
        return fv;
    };
    auto dense = [](const FeatureVector& fv) {
        std::vector<double> d(fv.total_dim(), 0.0);
        for (const auto& e : fv.tfidf) d[e.index] = e.value;
        std::copy(fv.embedding.begin(), fv.embedding.end(), d.begin() + fv.tfidf_dim);
        std::copy(fv.aux.begin(), fv.aux.end(), d.begin() + fv.tfidf_dim + fv.embedding.size());
        return d;
    };
    for (int t = 0; t < 200; ++t) {
        const auto a = random_fv(9), b = random_fv(9);
        const auto da = dense(a), db = dense(b);
        double dot = 0, dist = 0;
        for (std::size_t i = 0; i < da.size(); ++i) {
            dot += da[i] * db[i];
            dist += (da[i] - db[i]) * (da[i] - db[i]);
        }
        EXPECT_NEAR(SampleTraits<FeatureVector>::dot(a, b), dot, 1e-12);
        EXPECT_NEAR(SampleTraits<FeatureVector>::squared_distance(a, b), dist, 1e-12);
    }
    FeatureVector x = random_fv(9), y = random_fv(8);
    SvrHyperParams p;
    EXPECT_THROW(kernel_eval(p, x, y), DataError);
}
