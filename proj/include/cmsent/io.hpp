#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <zlib.h>

#include "cmsent/error.hpp"

namespace cmsent {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DataError("cannot rename onto " + path.string());
    }
}

inline std::uint32_t crc32_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes a uInt length; feed large inputs in chunks.
    constexpr std::size_t chunk = 1u << 30;
    for (std::size_t off = 0; off < bytes.size(); off += chunk) {
        const auto n = static_cast<uInt>(std::min(chunk, bytes.size() - off));
        crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off), n);
    }
    return static_cast<std::uint32_t>(crc);
}

inline std::string hex32(std::uint32_t v) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

// Size and CRC-32 of an input file, or "absent" when no file was supplied.
struct FileFingerprint {
    bool present = false;
    std::uint64_t size = 0;
    std::uint32_t crc = 0;

    static FileFingerprint of_file(const std::filesystem::path& path) {
        const auto bytes = read_file(path);
        return {true, bytes.size(), crc32_of(bytes)};
    }

    std::string to_string() const {
        return present ? std::to_string(size) + ":" + hex32(crc) : std::string("absent");
    }

    static FileFingerprint parse(std::string_view text) {
        if (text == "absent") return {};
        const auto colon = text.find(':');
        FileFingerprint fp{true, 0, 0};
        if (colon == std::string_view::npos) throw DataError("bad fingerprint '" + std::string(text) + "'");
        const auto sz = text.substr(0, colon);
        const auto crc = text.substr(colon + 1);
        auto r1 = std::from_chars(sz.data(), sz.data() + sz.size(), fp.size);
        auto r2 = std::from_chars(crc.data(), crc.data() + crc.size(), fp.crc, 16);
        if (r1.ec != std::errc{} || r1.ptr != sz.data() + sz.size() || r2.ec != std::errc{} ||
            r2.ptr != crc.data() + crc.size() || crc.size() != 8) {
            throw DataError("bad fingerprint '" + std::string(text) + "'");
        }
        return fp;
    }

    friend bool operator==(const FileFingerprint&, const FileFingerprint&) = default;
};

// 17 significant digits: enough for every double to round-trip exactly.
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Parses the whole of `text` as a finite double.
inline bool parse_real(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

inline std::string_view trim_right(std::string_view s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace cmsent
