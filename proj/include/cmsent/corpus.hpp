#pragma once

// Annotated code-mixed tweet corpora.
//
// On-disk format (UTF-8): blocks separated by exactly one blank line.
//
//     meta <uid> [<sentiment>]
//     <surface>\t<tag>
//     <surface>\t<tag>
//
// sentiment is one of negative|neutral|positive and may be omitted for
// unlabeled data; tag is one of ENG|HIN|O. Trailing whitespace on any line is
// ignored. Everything else that deviates from the layout is a ParseError.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cmsent/error.hpp"
#include "cmsent/io.hpp"
#include "cmsent/random.hpp"
#include "cmsent/unicode.hpp"

namespace cmsent {

// Declaration order is the encoding order: negative < neutral < positive.
enum class SentimentLabel : std::uint8_t { negative = 0, neutral = 1, positive = 2 };

inline constexpr std::array<SentimentLabel, 3> all_labels{
    SentimentLabel::negative, SentimentLabel::neutral, SentimentLabel::positive};

enum class LangTag : std::uint8_t { eng, hin, other };

inline std::string_view to_string(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::negative: return "negative";
        case SentimentLabel::neutral: return "neutral";
        case SentimentLabel::positive: return "positive";
    }
    return "?";
}

inline std::string_view to_string(LangTag tag) {
    switch (tag) {
        case LangTag::eng: return "ENG";
        case LangTag::hin: return "HIN";
        case LangTag::other: return "O";
    }
    return "?";
}

inline std::optional<SentimentLabel> parse_label(std::string_view text) {
    for (auto label : all_labels)
        if (text == to_string(label)) return label;
    return std::nullopt;
}

inline std::optional<LangTag> parse_lang_tag(std::string_view text) {
    if (text == "ENG") return LangTag::eng;
    if (text == "HIN") return LangTag::hin;
    if (text == "O") return LangTag::other;
    return std::nullopt;
}

struct Token {
    std::string surface;
    LangTag tag = LangTag::other;

    friend bool operator==(const Token&, const Token&) = default;
};

struct CodeMixedInstance {
    std::string uid;
    std::vector<Token> tokens;
    std::optional<SentimentLabel> label;

    friend bool operator==(const CodeMixedInstance&, const CodeMixedInstance&) = default;
};

struct CorpusSplit {
    std::vector<CodeMixedInstance> train;
    std::vector<CodeMixedInstance> validation;
    std::uint64_t seed = 0;
};

namespace detail {

class CorpusParser {
public:
    explicit CorpusParser(std::string source) : source_(std::move(source)) {}

    std::vector<CodeMixedInstance> run(std::string_view text) {
        const auto lines = split_lines(text);
        std::vector<CodeMixedInstance> out;
        std::unordered_set<std::string> seen;
        std::size_t meta_line = 0;
        bool in_block = false;
        std::size_t blank_run = 0;

        auto close_block = [&] {
            if (in_block && out.back().tokens.empty()) fail(meta_line, "block '" + out.back().uid + "' has no token lines");
            in_block = false;
        };

        for (std::size_t n = 0; n < lines.size(); ++n) {
            const std::size_t lineno = n + 1;
            const auto raw = lines[n];
            if (!unicode::is_valid_utf8(raw)) fail(lineno, "invalid UTF-8");
            const auto line = trim_right(raw);

            if (line.empty()) {
                close_block();
                ++blank_run;
                continue;
            }
            if (!in_block) {
                if (!out.empty() && blank_run != 1) fail(lineno, "blocks must be separated by exactly one blank line");
                if (out.empty() && blank_run != 0) fail(lineno, "blank line before the first block");
                blank_run = 0;
                out.push_back(parse_meta(line, lineno));
                if (!seen.insert(out.back().uid).second) fail(lineno, "duplicate uid '" + out.back().uid + "'");
                meta_line = lineno;
                in_block = true;
                continue;
            }
            out.back().tokens.push_back(parse_token(line, lineno));
        }
        close_block();
        return out;
    }

private:
    [[noreturn]] void fail(std::size_t line, const std::string& what) const { throw ParseError(source_, line, what); }

    CodeMixedInstance parse_meta(std::string_view line, std::size_t lineno) const {
        const auto fields = split_on(line, ' ');
        if (fields.empty() || fields[0] != "meta") fail(lineno, "expected 'meta <uid> [<sentiment>]'");
        if (fields.size() < 2 || fields.size() > 3) fail(lineno, "malformed meta line");
        for (auto f : fields)
            if (f.empty() || f.find('\t') != std::string_view::npos) fail(lineno, "malformed meta line");
        CodeMixedInstance inst;
        inst.uid = std::string(fields[1]);
        if (fields.size() == 3) {
            inst.label = parse_label(fields[2]);
            if (!inst.label) fail(lineno, "unknown sentiment '" + std::string(fields[2]) + "'");
        }
        return inst;
    }

    Token parse_token(std::string_view line, std::size_t lineno) const {
        const auto fields = split_on(line, '\t');
        if (fields.size() != 2 || fields[0].empty()) {
            if (fields.size() == 1 && line.starts_with("meta "))
                fail(lineno, "meta line inside a block (missing blank line?)");
            fail(lineno, "expected '<surface>\\t<tag>'");
        }
        auto tag = parse_lang_tag(fields[1]);
        if (!tag) fail(lineno, "unknown language tag '" + std::string(fields[1]) + "'");
        return {std::string(fields[0]), *tag};
    }

    std::string source_;
};

}  // namespace detail

inline std::vector<CodeMixedInstance> parse_corpus_text(std::string_view text, const std::string& source = "<corpus>") {
    return detail::CorpusParser(source).run(text);
}

inline std::vector<CodeMixedInstance> parse_corpus(const std::filesystem::path& path) {
    return parse_corpus_text(read_file(path), path.string());
}

inline std::string serialize_corpus(std::span<const CodeMixedInstance> corpus) {
    std::string out;
    bool first = true;
    for (const auto& inst : corpus) {
        if (!first) out += '\n';
        first = false;
        out += "meta ";
        out += inst.uid;
        if (inst.label) {
            out += ' ';
            out += to_string(*inst.label);
        }
        out += '\n';
        for (const auto& tok : inst.tokens) {
            out += tok.surface;
            out += '\t';
            out += to_string(tok.tag);
            out += '\n';
        }
    }
    return out;
}

// Seeded shuffle, then the last round(fraction * N) instances form the
// validation part.
inline CorpusSplit split_corpus(std::span<const CodeMixedInstance> corpus, double validation_fraction,
                                std::uint64_t seed) {
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw ConfigError("validation fraction must lie in (0, 1)");
    const std::size_t n = corpus.size();
    if (n < 2) throw DataError("corpus needs at least 2 instances to split");
    const auto n_val = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(n)));
    if (n_val == 0 || n_val >= n)
        throw DataError("split of " + std::to_string(n) + " instances leaves an empty part");

    const auto order = seeded_permutation(n, seed);
    CorpusSplit split;
    split.seed = seed;
    split.train.reserve(n - n_val);
    split.validation.reserve(n_val);
    for (std::size_t i = 0; i < n; ++i) {
        auto& part = i < n - n_val ? split.train : split.validation;
        part.push_back(corpus[order[i]]);
    }
    return split;
}

// Counts over labeled instances; every label is present as a key.
inline std::map<SentimentLabel, std::size_t> class_histogram(std::span<const CodeMixedInstance> corpus) {
    std::map<SentimentLabel, std::size_t> counts;
    for (auto label : all_labels) counts[label] = 0;
    for (const auto& inst : corpus)
        if (inst.label) ++counts[*inst.label];
    return counts;
}

}  // namespace cmsent
