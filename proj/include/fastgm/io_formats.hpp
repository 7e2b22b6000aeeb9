#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fastgm/embedding.hpp"
#include "fastgm/sketch.hpp"
#include "fastgm/sparse_vector.hpp"

namespace fastgm {

// Text corpora (tab-delimited) and the binary sketch file format.
//
// Vector lines:  <id>\t<idx>:<weight>( <idx>:<weight>)*
// Graph lines:   <u>\t<v>(\t<weight>)?
// Pair lines:    <id1>\t<id2>
// '#' starts a comment line in all three; blank lines are skipped.
//
// Sketch file (all little-endian):
//   magic "FGMS" | version u16 | k u32 | global_seed u64 | record_count u64
//   then per record: id_length u16, id bytes (UTF-8),
//   k x u32 register element indices, k x f64 register timestamps.

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class FormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NamedSketch {
    std::string id;
    GumbelMaxSketch sketch;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline bool skippable(const std::string& line) {
    return line.empty() || line[0] == '#';
}

inline double parse_weight(const std::string& tok, std::size_t line_no) {
    std::size_t consumed = 0;
    double w;
    try {
        w = std::stod(tok, &consumed);
    } catch (const std::exception&) {
        throw ParseError(line_no, "malformed weight '" + tok + "'");
    }
    if (consumed != tok.size()) throw ParseError(line_no, "malformed weight '" + tok + "'");
    return w;
}

inline std::uint32_t parse_index(const std::string& tok, std::size_t line_no) {
    std::size_t consumed = 0;
    unsigned long idx;
    try {
        idx = std::stoul(tok, &consumed);
    } catch (const std::exception&) {
        throw ParseError(line_no, "malformed index '" + tok + "'");
    }
    if (consumed != tok.size() || idx > 0xFFFFFFFEul)
        throw ParseError(line_no, "malformed index '" + tok + "'");
    return static_cast<std::uint32_t>(idx);
}

} // namespace detail

inline std::vector<std::pair<std::string, SparseVector>> parse_vectors(std::istream& in) {
    std::vector<std::pair<std::string, SparseVector>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::skippable(line)) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw ParseError(line_no, "expected <id><TAB>idx:weight ...");
        const std::string id = line.substr(0, tab);
        std::vector<SparseVector::Entry> entries;
        for (const auto& tok : detail::split(line.substr(tab + 1), ' ')) {
            if (tok.empty()) continue;
            const std::size_t colon = tok.find(':');
            if (colon == std::string::npos)
                throw ParseError(line_no, "malformed entry '" + tok + "'");
            const std::uint32_t idx = detail::parse_index(tok.substr(0, colon), line_no);
            const double w = detail::parse_weight(tok.substr(colon + 1), line_no);
            if (!(w > 0.0)) throw ParseError(line_no, "nonpositive weight for index "
                                                          + std::to_string(idx));
            entries.push_back({idx, w});
        }
        try {
            out.emplace_back(id, SparseVector::from_entries(std::move(entries)));
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return out;
}

inline std::vector<Edge> parse_graph(std::istream& in) {
    std::vector<Edge> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::skippable(line)) continue;
        const auto cols = detail::split(line, '\t');
        if (cols.size() != 2 && cols.size() != 3)
            throw ParseError(line_no, "expected <u><TAB><v>[<TAB><weight>]");
        Edge e;
        e.u = detail::parse_index(cols[0], line_no);
        e.v = detail::parse_index(cols[1], line_no);
        e.weight = cols.size() == 3 ? detail::parse_weight(cols[2], line_no) : 1.0;
        if (e.weight < 0.0) throw ParseError(line_no, "negative edge weight");
        out.push_back(e);
    }
    return out;
}

inline std::vector<std::pair<std::string, std::string>> parse_pairs(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::skippable(line)) continue;
        const auto cols = detail::split(line, '\t');
        if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
            throw ParseError(line_no, "expected <id1><TAB><id2>");
        out.emplace_back(cols[0], cols[1]);
    }
    return out;
}

namespace detail {

constexpr char kSketchMagic[4] = {'F', 'G', 'M', 'S'};
constexpr std::uint16_t kSketchVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_unsigned_v<T>);
    char buf[sizeof(T)];
    for (std::size_t b = 0; b < sizeof(T); ++b)
        buf[b] = static_cast<char>((value >> (8 * b)) & 0xFF);
    out.write(buf, sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
    static_assert(std::is_unsigned_v<T>);
    char buf[sizeof(T)];
    in.read(buf, sizeof(T));
    if (!in) throw FormatError("truncated sketch file");
    T value = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b)
        value |= static_cast<T>(static_cast<unsigned char>(buf[b])) << (8 * b);
    return value;
}

inline void put_f64(std::ostream& out, double v) {
    put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

inline double get_f64(std::istream& in) {
    return std::bit_cast<double>(get_le<std::uint64_t>(in));
}

} // namespace detail

inline void write_sketches(std::ostream& out, const std::vector<NamedSketch>& sketches) {
    std::uint32_t k = 0;
    std::uint64_t seed = 0;
    if (!sketches.empty()) {
        k = sketches.front().sketch.k;
        seed = sketches.front().sketch.global_seed;
    }
    for (const auto& ns : sketches) {
        if (ns.sketch.k != k || ns.sketch.global_seed != seed)
            throw FormatError("write_sketches: mixed (k, seed) in one file");
        if (!ns.sketch.complete())
            throw FormatError("write_sketches: incomplete sketch '" + ns.id + "'");
        if (ns.id.size() > 0xFFFF)
            throw FormatError("write_sketches: id longer than 65535 bytes");
    }
    out.write(detail::kSketchMagic, 4);
    detail::put_le<std::uint16_t>(out, detail::kSketchVersion);
    detail::put_le<std::uint32_t>(out, k);
    detail::put_le<std::uint64_t>(out, seed);
    detail::put_le<std::uint64_t>(out, sketches.size());
    for (const auto& ns : sketches) {
        detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(ns.id.size()));
        out.write(ns.id.data(), static_cast<std::streamsize>(ns.id.size()));
        for (std::uint32_t j = 0; j < k; ++j)
            detail::put_le<std::uint32_t>(out, ns.sketch.s[j]);
        for (std::uint32_t j = 0; j < k; ++j)
            detail::put_f64(out, ns.sketch.y[j]);
    }
    if (!out) throw FormatError("write_sketches: stream write failed");
}

inline std::vector<NamedSketch> read_sketches(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, detail::kSketchMagic, 4) != 0)
        throw FormatError("bad magic: not a sketch file");
    const auto version = detail::get_le<std::uint16_t>(in);
    if (version != detail::kSketchVersion)
        throw FormatError("unsupported sketch file version " + std::to_string(version));
    const auto k = detail::get_le<std::uint32_t>(in);
    const auto seed = detail::get_le<std::uint64_t>(in);
    const auto count = detail::get_le<std::uint64_t>(in);

    std::vector<NamedSketch> out;
    out.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r) {
        NamedSketch ns;
        const auto id_len = detail::get_le<std::uint16_t>(in);
        ns.id.resize(id_len);
        in.read(ns.id.data(), id_len);
        if (!in) throw FormatError("truncated sketch file");
        ns.sketch.k = k;
        ns.sketch.global_seed = seed;
        ns.sketch.s.resize(k);
        ns.sketch.y.resize(k);
        for (std::uint32_t j = 0; j < k; ++j) {
            ns.sketch.s[j] = detail::get_le<std::uint32_t>(in);
            if (ns.sketch.s[j] == GumbelMaxSketch::kEmpty)
                throw FormatError("record contains the reserved empty-register sentinel");
        }
        for (std::uint32_t j = 0; j < k; ++j) ns.sketch.y[j] = detail::get_f64(in);
        out.push_back(std::move(ns));
    }
    return out;
}

} // namespace fastgm
