#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cmsent/corpus.hpp"
#include "cmsent/preprocess.hpp"

using namespace cmsent;

namespace {

using Words = std::vector<std::string>;

CodeMixedInstance tokens_of(const Words& surfaces) {
    CodeMixedInstance inst;
    inst.uid = "t";
    for (const auto& s : surfaces) inst.tokens.push_back({s, LangTag::other});
    return inst;
}

std::string join(const Words& w) {
    std::string out;
    for (const auto& s : w) out += (out.empty() ? "" : " ") + s;
    return out;
}

// Random strings drawn from an alphabet that exercises every rule.
std::string random_text(std::mt19937_64& rng) {
    static const std::vector<std::string> pieces{
        "a", "B", "z", "Q", "7", "_", " ", "  ", "\t", "\n", "#", "##", "@", "!", ".", "-", "http://", "https://",
        "www.", "HTTP://", "é", "É", "नमस्ते", "😀", "€", ",", "?", "x@y", "Ab", "CD", "ef", "12",
    };
    std::uniform_int_distribution<std::size_t> len(0, 14), pick(0, pieces.size() - 1);
    std::string s;
    const auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) s += pieces[pick(rng)];
    return s;
}

}  // namespace

TEST(StripUrls, Examples) {
    EXPECT_EQ(strip_urls("see http://t.co/ab1 now"), "see  now");
    EXPECT_EQ(strip_urls("no links here"), "no links here");
    EXPECT_EQ(strip_urls("www.a.com x https://b.io/q?z=1"), " x ");
    EXPECT_EQ(strip_urls("HTTPS://LOUD.example end"), " end");
    EXPECT_EQ(strip_urls("https://x\tnext"), "\tnext");
}

TEST(StripMentions, Examples) {
    EXPECT_EQ(strip_mentions("@modi great speech"), " great speech");
    EXPECT_EQ(strip_mentions("email a@b stays? no"), "email a stays? no");
    EXPECT_EQ(strip_mentions(""), "");
    EXPECT_EQ(strip_mentions("lone @ sign"), "lone @ sign");
    EXPECT_EQ(strip_mentions("@user_name_1!"), "!");
    EXPECT_EQ(strip_mentions("@@x"), "@");
}

TEST(ExtractHashtagWords, Examples) {
    EXPECT_EQ(extract_hashtag_words("#CoronaVirus"), "Corona Virus");
    EXPECT_EQ(extract_hashtag_words("#abc"), "abc");
    EXPECT_EQ(extract_hashtag_words("#COVID19Update"), "COVID 19 Update");
    EXPECT_EQ(extract_hashtag_words("#HTMLParser"), "HTML Parser");
    EXPECT_EQ(extract_hashtag_words("#stay_home"), "stay home");
    EXPECT_EQ(extract_hashtag_words("##Double"), "Double");
    EXPECT_EQ(extract_hashtag_words("# alone"), "# alone");
    EXPECT_EQ(extract_hashtag_words("#One#Two"), "One Two");
    EXPECT_EQ(extract_hashtag_words("so#Cool"), "so Cool");
    EXPECT_EQ(extract_hashtag_words("#Fit2020!"), "Fit 2020!");
}

TEST(SegmentHashtag, FourAlternativeRule) {
    auto seg = [](std::u32string_view s) { return segment_hashtag_body(s); };
    EXPECT_EQ(seg(U"iPhone"), (Words{"i", "Phone"}));
    EXPECT_EQ(seg(U"ABC"), (Words{"ABC"}));
    EXPECT_EQ(seg(U"A"), (Words{"A"}));
    EXPECT_EQ(seg(U"aB"), (Words{"a", "B"}));
    EXPECT_EQ(seg(U"2020Vision"), (Words{"2020", "Vision"}));
    EXPECT_EQ(seg(U"ÉtéChaud"), (Words{"Été", "Chaud"}));
    EXPECT_EQ(seg(U"___"), Words{});
}

TEST(StripPunctuation, Examples) {
    EXPECT_EQ(strip_punctuation("wow!!! kya baat..."), "wow    kya baat   ");
    EXPECT_EQ(strip_punctuation("plain words"), "plain words");
    EXPECT_EQ(contract_whitespace(strip_punctuation("a-b_c")), "a b c");
    EXPECT_EQ(strip_punctuation("a-b_c"), "a b c");
    EXPECT_EQ(strip_punctuation("€5 + 😀"), " 5    ");
    EXPECT_EQ(strip_punctuation("«quoted»"), " quoted ");
}

TEST(ContractWhitespace, Examples) {
    EXPECT_EQ(contract_whitespace("a   b "), "a b");
    EXPECT_EQ(contract_whitespace(""), "");
    EXPECT_EQ(contract_whitespace("\t x\n\n y "), "x y");
    EXPECT_EQ(contract_whitespace("a  b"), "a b");
}

TEST(Clean, Examples) {
    EXPECT_EQ(clean(tokens_of({"@user", "#GoodDay", "hai", "!!", "http://x.co"})).words,
              (Words{"good", "day", "hai"}));
    EXPECT_EQ(clean(tokens_of({"#CoronaVirus"})).words, (Words{"corona", "virus"}));
    EXPECT_TRUE(clean(tokens_of({"..."})).words.empty());
    EXPECT_TRUE(clean(tokens_of({})).words.empty());
    EXPECT_EQ(clean(tokens_of({"ÉTÉ"})).words, (Words{"été"}));
    EXPECT_EQ(clean(tokens_of({"x"})).source_uid, "t");
}

TEST(Clean, InvalidUtf8BecomesReplacementSymbolAndIsDropped) {
    // U+FFFD is a symbol (So), so it is stripped like other symbols.
    EXPECT_EQ(clean_text("ok\xff" "fine"), (Words{"ok", "fine"}));
}

TEST(Properties, SingleStepsAreIdempotent) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
        const auto t = random_text(rng);
        const auto u = strip_urls(t);
        EXPECT_EQ(strip_urls(u), u) << t;
        const auto m = strip_mentions(t);
        EXPECT_EQ(strip_mentions(m), m) << t;
        const auto p = strip_punctuation(t);
        EXPECT_EQ(strip_punctuation(p), p) << t;
        const auto w = contract_whitespace(t);
        EXPECT_EQ(contract_whitespace(w), w) << t;
        const auto h = extract_hashtag_words(t);
        EXPECT_EQ(extract_hashtag_words(h), h) << t;
    }
}

TEST(Properties, CleanIsIdempotentAndScrubbed) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 2000; ++i) {
        const auto t = random_text(rng);
        const auto words = clean_text(t);
        EXPECT_EQ(clean_text(join(words)), words) << t;
        EXPECT_EQ(clean_text(t), words);
        for (const auto& w : words) {
            ASSERT_FALSE(w.empty());
            for (char32_t c : unicode::decode(w)) {
                EXPECT_FALSE(unicode::is_space(c)) << t;
                EXPECT_FALSE(unicode::is_punct_or_symbol(c)) << t;
                EXPECT_NE(c, U'#');
                EXPECT_NE(c, U'@');
            }
            EXPECT_EQ(w.find("http"), std::string::npos) << t;
            EXPECT_EQ(w.find("www."), std::string::npos) << t;
            EXPECT_EQ(unicode::to_lower(w), w);
        }
    }
}

// Expected lines come from tests/tools/golden_oracle.py, an independent
// cleaner built on Python's Unicode tables.
TEST(Golden, CuratedTweetsMatchStoredOutput) {
    const std::string dir = CMSENT_TEST_DATA_DIR;
    const auto corpus = parse_corpus(dir + "/golden_tweets.txt");
    std::ifstream in(dir + "/golden_expected.txt", std::ios::binary);
    std::vector<std::string> expected;
    for (std::string line; std::getline(in, line);) expected.push_back(line);
    ASSERT_EQ(corpus.size(), 50u);
    ASSERT_EQ(expected.size(), 50u);
    EXPECT_EQ(expected[0], "corona virus");
    for (std::size_t i = 0; i < corpus.size(); ++i)
        EXPECT_EQ(join(clean(corpus[i]).words), expected[i]) << corpus[i].uid;
}
