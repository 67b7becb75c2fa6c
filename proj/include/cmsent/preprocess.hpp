#pragma once

// Tweet normalization. clean() applies, in order:
//   strip_urls -> strip_mentions -> extract_hashtag_words
//   -> strip_punctuation -> contract_whitespace -> lowercase -> split
// URLs and '#'/'@' markers must be handled before punctuation removal
// destroys them. Every step is a pure function and idempotent.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cmsent/corpus.hpp"
#include "cmsent/unicode.hpp"

namespace cmsent {

struct CleanDocument {
    std::vector<std::string> words;
    std::string source_uid;

    friend bool operator==(const CleanDocument&, const CleanDocument&) = default;
};

namespace detail {

inline bool ascii_iequal_prefix(std::u32string_view text, std::size_t pos, std::string_view prefix) {
    if (text.size() - pos < prefix.size()) return false;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        char32_t c = text[pos + k];
        if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
        if (c != static_cast<char32_t>(prefix[k])) return false;
    }
    return true;
}

enum class SegmentClass { upper, lower, digit, separator };

inline SegmentClass classify(char32_t c) {
    if (c == U'_') return SegmentClass::separator;
    if (unicode::is_number(c)) return SegmentClass::digit;
    if (unicode::is_upper(c)) return SegmentClass::upper;
    return SegmentClass::lower;  // lowercase, caseless letters and marks
}

}  // namespace detail

// Removes every http://, https:// or www. run up to the next whitespace.
inline std::string strip_urls(std::string_view text) {
    static constexpr std::array<std::string_view, 3> prefixes{"http://", "https://", "www."};
    const auto cps = unicode::decode(text);
    std::u32string out;
    out.reserve(cps.size());
    for (std::size_t i = 0; i < cps.size();) {
        bool is_url = false;
        for (auto p : prefixes) is_url = is_url || detail::ascii_iequal_prefix(cps, i, p);
        if (is_url) {
            while (i < cps.size() && !unicode::is_space(cps[i])) ++i;
        } else {
            out.push_back(cps[i++]);
        }
    }
    return unicode::encode(out);
}

// Removes '@' followed by one or more word characters.
inline std::string strip_mentions(std::string_view text) {
    const auto cps = unicode::decode(text);
    std::u32string out;
    out.reserve(cps.size());
    for (std::size_t i = 0; i < cps.size();) {
        if (cps[i] == U'@' && i + 1 < cps.size() && unicode::is_word(cps[i + 1])) {
            ++i;
            while (i < cps.size() && unicode::is_word(cps[i])) ++i;
        } else {
            out.push_back(cps[i++]);
        }
    }
    return unicode::encode(out);
}

// Splits a hashtag body into words at case and digit boundaries:
//   digit runs; lowercase runs; an uppercase run followed by lowercase gives
//   its leading capitals as one word and the last capital starts the next
//   ("HTMLParser" -> HTML Parser); other uppercase runs stay whole.
// Underscores separate words and are dropped.
inline std::vector<std::string> segment_hashtag_body(std::u32string_view body) {
    using detail::SegmentClass;
    std::vector<std::u32string> words;
    std::size_t i = 0;
    auto run_end = [&](std::size_t from, SegmentClass cls) {
        while (from < body.size() && detail::classify(body[from]) == cls) ++from;
        return from;
    };
    while (i < body.size()) {
        const auto cls = detail::classify(body[i]);
        if (cls == SegmentClass::separator) {
            ++i;
            continue;
        }
        if (cls != SegmentClass::upper) {
            const auto end = run_end(i, cls);
            words.emplace_back(body.substr(i, end - i));
            i = end;
            continue;
        }
        const auto upper_end = run_end(i, SegmentClass::upper);
        const bool then_lower = upper_end < body.size() && detail::classify(body[upper_end]) == SegmentClass::lower;
        if (!then_lower) {
            words.emplace_back(body.substr(i, upper_end - i));
            i = upper_end;
            continue;
        }
        if (upper_end - i > 1) words.emplace_back(body.substr(i, upper_end - 1 - i));
        const auto word_start = upper_end - 1;
        const auto end = run_end(upper_end, SegmentClass::lower);
        words.emplace_back(body.substr(word_start, end - word_start));
        i = end;
    }
    std::vector<std::string> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(unicode::encode(w));
    return out;
}

// Replaces each '#'-run followed by a word body with the segmented body,
// space-separated from a word character just before it.
inline std::string extract_hashtag_words(std::string_view text) {
    const auto cps = unicode::decode(text);
    std::u32string out;
    out.reserve(cps.size());
    for (std::size_t i = 0; i < cps.size();) {
        if (cps[i] != U'#') {
            out.push_back(cps[i++]);
            continue;
        }
        std::size_t body_start = i;
        while (body_start < cps.size() && cps[body_start] == U'#') ++body_start;
        std::size_t body_end = body_start;
        while (body_end < cps.size() && unicode::is_word(cps[body_end])) ++body_end;
        if (body_end == body_start) {
            out.append(cps, i, body_start - i);
        } else {
            const auto words = segment_hashtag_body(std::u32string_view(cps).substr(body_start, body_end - body_start));
            // Keeps "#a#b" or "x#tag" from fusing into one word.
            if (!words.empty() && !out.empty() && unicode::is_word(out.back())) out.push_back(U' ');
            for (std::size_t w = 0; w < words.size(); ++w) {
                if (w) out.push_back(U' ');
                out += unicode::decode(words[w]);
            }
        }
        i = body_end;
    }
    return unicode::encode(out);
}

// Each P* or S* code point becomes one space.
inline std::string strip_punctuation(std::string_view text) {
    auto cps = unicode::decode(text);
    for (auto& c : cps)
        if (unicode::is_punct_or_symbol(c)) c = U' ';
    return unicode::encode(cps);
}

inline std::string contract_whitespace(std::string_view text) {
    const auto cps = unicode::decode(text);
    std::u32string out;
    bool pending_space = false;
    for (char32_t c : cps) {
        if (unicode::is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(U' ');
        pending_space = false;
        out.push_back(c);
    }
    return unicode::encode(out);
}

inline std::vector<std::string> clean_text(std::string_view text) {
    auto s = strip_urls(text);
    s = strip_mentions(s);
    s = extract_hashtag_words(s);
    s = strip_punctuation(s);
    s = contract_whitespace(s);
    s = unicode::to_lower(s);
    std::vector<std::string> words;
    for (auto w : split_on(s, ' '))
        if (!w.empty()) words.emplace_back(w);
    return words;
}

inline CleanDocument clean(const CodeMixedInstance& instance) {
    std::string joined;
    for (const auto& tok : instance.tokens) {
        if (!joined.empty()) joined += ' ';
        joined += tok.surface;
    }
    return {clean_text(joined), instance.uid};
}

}  // namespace cmsent
