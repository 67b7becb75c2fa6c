#pragma once

// Model file, format version 1. Line-oriented UTF-8 text; reals are written
// with 17 significant digits so every value reloads bit-for-bit.
//
//   cmsent-model 1
//   created_at <timestamp, or - when unset>
//   kernel <linear|rbf>
//   c <real>
//   epsilon <real>
//   gamma <real>
//   tol <real>
//   cache_size_mb <int>
//   coef0 <real>
//   max_iter <int>
//   shrinking <0|1>
//   fingerprint <embeddings|humor|hate|offense|sentiment|easy_words> <size:crc32|absent>   (x6, this order)
//   syllable_threshold <int>
//   tfidf <V> <n_docs>
//   <word>\t<idf>                                         (x V, sorted)
//   embedding_dim <d>
//   bias <real>
//   n_iterations <int>
//   converged <0|1>
//   support_vectors <n>
//   sv <coef> <nnz> <index>:<value> x nnz <embedding> x d <aux> x 12   (x n)
//   checksum <crc32 of every preceding byte, 8 hex digits>
//
// The version line is checked before the checksum, so a file from another
// format version reports VersionError rather than corruption.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cmsent/error.hpp"
#include "cmsent/io.hpp"
#include "cmsent/pipeline.hpp"

namespace cmsent {

inline constexpr std::string_view model_magic = "cmsent-model";
inline constexpr int model_format_version = 1;

inline std::string serialize_model(const PipelineModel& m) {
    std::string out;
    auto line = [&out](std::string_view key, const std::string& value) {
        out += key;
        out += ' ';
        out += value;
        out += '\n';
    };
    const auto& p = m.svr.params;
    line(model_magic, std::to_string(model_format_version));
    line("created_at", m.created_at.empty() ? "-" : m.created_at);
    line("kernel", std::string(to_string(p.kernel)));
    line("c", format_real(p.c));
    line("epsilon", format_real(p.epsilon));
    line("gamma", format_real(p.gamma));
    line("tol", format_real(p.tol));
    line("cache_size_mb", std::to_string(p.cache_size_mb));
    line("coef0", format_real(p.coef0));
    line("max_iter", std::to_string(p.max_iter));
    line("shrinking", p.shrinking ? "1" : "0");
    const auto& fp = m.fingerprints;
    line("fingerprint", "embeddings " + fp.embeddings.to_string());
    line("fingerprint", "humor " + fp.humor.to_string());
    line("fingerprint", "hate " + fp.hate.to_string());
    line("fingerprint", "offense " + fp.offense.to_string());
    line("fingerprint", "sentiment " + fp.sentiment.to_string());
    line("fingerprint", "easy_words " + fp.easy_words.to_string());
    line("syllable_threshold", std::to_string(m.difficult_syllable_threshold));
    line("tfidf", std::to_string(m.tfidf.size()) + " " + std::to_string(m.tfidf.n_docs()));
    for (std::size_t i = 0; i < m.tfidf.size(); ++i) {
        out += m.tfidf.vocabulary()[i];
        out += '\t';
        out += format_real(m.tfidf.idf()[i]);
        out += '\n';
    }
    line("embedding_dim", std::to_string(m.embedding_dim));
    line("bias", format_real(m.svr.bias));
    line("n_iterations", std::to_string(m.svr.n_iterations));
    line("converged", m.svr.converged ? "1" : "0");
    line("support_vectors", std::to_string(m.svr.support_vectors.size()));
    for (std::size_t s = 0; s < m.svr.support_vectors.size(); ++s) {
        const auto& sv = m.svr.support_vectors[s];
        std::string rec = format_real(m.svr.dual_coef[s]) + " " + std::to_string(sv.tfidf.size());
        for (const auto& e : sv.tfidf) rec += " " + std::to_string(e.index) + ":" + format_real(e.value);
        for (double v : sv.embedding) rec += " " + format_real(v);
        for (double v : sv.aux) rec += " " + format_real(v);
        line("sv", rec);
    }
    out += "checksum " + hex32(crc32_of(out)) + "\n";
    return out;
}

namespace detail {

class ModelReader {
public:
    ModelReader(std::string_view body, std::string source) : lines_(split_lines(body)), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw CorruptFileError(source_ + ": line " + std::to_string(pos_) + ": " + what);
    }

    std::string_view next() {
        if (pos_ >= lines_.size()) fail("unexpected end of file");
        return lines_[pos_++];
    }

    // Returns the value part of "<key> <value>".
    std::string_view field(std::string_view key) {
        const auto l = next();
        if (l.size() <= key.size() || !l.starts_with(key) || l[key.size()] != ' ')
            fail("expected '" + std::string(key) + "'");
        return l.substr(key.size() + 1);
    }

    double real(std::string_view key) { return to_real(field(key)); }

    template <typename Int>
    Int integer(std::string_view key) {
        return to_int<Int>(field(key));
    }

    double to_real(std::string_view t) const {
        double v;
        if (!parse_real(t, v)) fail("bad real '" + std::string(t) + "'");
        return v;
    }

    template <typename Int>
    Int to_int(std::string_view t) const {
        Int v;
        if (!parse_int(t, v)) fail("bad integer '" + std::string(t) + "'");
        return v;
    }

    bool flag(std::string_view key) {
        const auto v = field(key);
        if (v != "0" && v != "1") fail("expected 0 or 1 for '" + std::string(key) + "'");
        return v == "1";
    }

    bool at_end() const { return pos_ == lines_.size(); }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
    std::string source_;
};

}  // namespace detail

inline PipelineModel parse_model(std::string_view text, const std::string& source = "<model>") {
    const auto first_nl = text.find('\n');
    const auto header = text.substr(0, first_nl);
    if (!header.starts_with(std::string(model_magic) + " ")) throw CorruptFileError(source + ": not a model file");
    int version = 0;
    if (!parse_int(header.substr(model_magic.size() + 1), version))
        throw CorruptFileError(source + ": unreadable format version");
    if (version != model_format_version)
        throw VersionError(source + ": model format version " + std::to_string(version) + ", expected " +
                           std::to_string(model_format_version));

    // Trailer: "checksum xxxxxxxx\n" over everything before it.
    constexpr std::string_view tag = "checksum ";
    if (text.size() < tag.size() + 9 || text.back() != '\n')
        throw CorruptFileError(source + ": truncated (no checksum trailer)");
    const auto trailer_start = text.rfind('\n', text.size() - 2) + 1;
    const auto trailer = text.substr(trailer_start, text.size() - 1 - trailer_start);
    if (!trailer.starts_with(tag) || trailer.size() != tag.size() + 8)
        throw CorruptFileError(source + ": truncated (no checksum trailer)");
    const auto body = text.substr(0, trailer_start);
    if (hex32(crc32_of(body)) != trailer.substr(tag.size()))
        throw CorruptFileError(source + ": checksum mismatch");

    detail::ModelReader r(body, source);
    PipelineModel m;
    r.next();
    m.created_at = std::string(r.field("created_at"));
    auto& p = m.svr.params;
    try {
        p.kernel = parse_kernel(r.field("kernel"));
    } catch (const ConfigError& e) {
        r.fail(e.what());
    }
    p.c = r.real("c");
    p.epsilon = r.real("epsilon");
    p.gamma = r.real("gamma");
    p.tol = r.real("tol");
    p.cache_size_mb = r.integer<int>("cache_size_mb");
    p.coef0 = r.real("coef0");
    p.max_iter = r.integer<long long>("max_iter");
    p.shrinking = r.flag("shrinking");
    try {
        p.validate();
    } catch (const ConfigError& e) {
        r.fail(e.what());
    }

    auto fingerprint = [&](std::string_view name) {
        const auto v = r.field("fingerprint");
        if (!v.starts_with(name) || v.size() <= name.size() || v[name.size()] != ' ')
            r.fail("expected fingerprint for " + std::string(name));
        try {
            return FileFingerprint::parse(v.substr(name.size() + 1));
        } catch (const DataError& e) {
            r.fail(e.what());
        }
    };
    m.fingerprints.embeddings = fingerprint("embeddings");
    m.fingerprints.humor = fingerprint("humor");
    m.fingerprints.hate = fingerprint("hate");
    m.fingerprints.offense = fingerprint("offense");
    m.fingerprints.sentiment = fingerprint("sentiment");
    m.fingerprints.easy_words = fingerprint("easy_words");
    m.difficult_syllable_threshold = r.integer<int>("syllable_threshold");

    const auto tf = split_on(r.field("tfidf"), ' ');
    if (tf.size() != 2) r.fail("expected 'tfidf <V> <n_docs>'");
    const auto vocab_size = r.to_int<std::size_t>(tf[0]);
    const auto n_docs = r.to_int<std::size_t>(tf[1]);
    std::vector<std::string> vocab;
    std::vector<double> idf;
    for (std::size_t i = 0; i < vocab_size; ++i) {
        const auto parts = split_on(r.next(), '\t');
        if (parts.size() != 2 || parts[0].empty()) r.fail("bad vocabulary record");
        vocab.emplace_back(parts[0]);
        idf.push_back(r.to_real(parts[1]));
    }
    try {
        m.tfidf = TfidfModel(std::move(vocab), std::move(idf), n_docs);
    } catch (const DataError& e) {
        r.fail(e.what());
    }

    m.embedding_dim = r.integer<std::size_t>("embedding_dim");
    m.svr.bias = r.real("bias");
    m.svr.n_iterations = r.integer<long long>("n_iterations");
    m.svr.converged = r.flag("converged");
    m.svr.dimension = m.tfidf.size() + m.embedding_dim + aux_size;
    const auto n_sv = r.integer<std::size_t>("support_vectors");
    for (std::size_t s = 0; s < n_sv; ++s) {
        const auto tok = split_on(r.field("sv"), ' ');
        if (tok.size() < 2) r.fail("short support-vector record");
        const double coef = r.to_real(tok[0]);
        const auto nnz = r.to_int<std::size_t>(tok[1]);
        if (tok.size() != 2 + nnz + m.embedding_dim + aux_size) r.fail("support-vector record has wrong length");
        FeatureVector fv;
        fv.tfidf_dim = m.tfidf.size();
        std::size_t k = 2;
        for (std::size_t e = 0; e < nnz; ++e, ++k) {
            const auto colon = tok[k].find(':');
            if (colon == std::string_view::npos) r.fail("bad sparse entry");
            const auto index = r.to_int<std::uint32_t>(tok[k].substr(0, colon));
            if (index >= fv.tfidf_dim || (!fv.tfidf.empty() && fv.tfidf.back().index >= index))
                r.fail("sparse indices out of range or unsorted");
            fv.tfidf.push_back({index, r.to_real(tok[k].substr(colon + 1))});
        }
        fv.embedding.resize(m.embedding_dim);
        for (auto& v : fv.embedding) v = r.to_real(tok[k++]);
        for (auto& v : fv.aux) v = r.to_real(tok[k++]);
        m.svr.support_vectors.push_back(std::move(fv));
        m.svr.dual_coef.push_back(coef);
    }
    if (!r.at_end()) r.fail("trailing data after support vectors");
    return m;
}

inline void save_model(const std::filesystem::path& path, const PipelineModel& model) {
    write_file_atomic(path, serialize_model(model));
}

inline PipelineModel load_model(const std::filesystem::path& path) {
    return parse_model(read_file(path), path.string());
}

}  // namespace cmsent
