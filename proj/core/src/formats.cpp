#include "trackref/formats.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <utility>

namespace trackref {

namespace {

constexpr char kMagic[4] = {'G', 'T', 'A', 'E'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 16;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

int parse_int_field(std::string_view field, std::size_t line_no, const char* name) {
    field = trim(field);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(line_no, std::string(name) + " is not an integer: '" +
                                      std::string(field) + "'");
    }
    return value;
}

double parse_real_field(std::string_view field, std::size_t line_no, const char* name) {
    field = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(line_no, std::string(name) + " is not a number: '" +
                                      std::string(field) + "'");
    }
    return value;
}

std::uint32_t read_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void append_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

struct RowRef {
    int frame;
    int id;
    const Tracklet* tracklet;
    std::size_t index;
};

// Observations sorted by (frame, id); write_mot and embedding_table_of must
// agree on this order so the two output files stay aligned line for line.
std::vector<RowRef> canonical_rows(const TrackSet& ts) {
    std::vector<RowRef> rows;
    rows.reserve(ts.total_observations());
    for (const Tracklet& t : ts.tracklets()) {
        for (std::size_t i = 0; i < t.length(); ++i) {
            rows.push_back({t.observations()[i].frame, t.id(), &t, i});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const RowRef& a, const RowRef& b) {
        return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
    });
    return rows;
}

double round_two_decimals(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::strtod(buf, nullptr);
}

}  // namespace

std::vector<MotRow> parse_mot(std::string_view text) {
    std::vector<MotRow> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        const std::string_view line = trim(raw);
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(
                start, comma == std::string_view::npos ? line.size() - start : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() < 7) {
            throw ParseError(line_no, "expected at least 7 comma-separated fields, got " +
                                          std::to_string(fields.size()));
        }

        const int frame = parse_int_field(fields[0], line_no, "frame");
        const int id = parse_int_field(fields[1], line_no, "id");
        const double left = parse_real_field(fields[2], line_no, "bb_left");
        const double top = parse_real_field(fields[3], line_no, "bb_top");
        const double width = parse_real_field(fields[4], line_no, "bb_width");
        const double height = parse_real_field(fields[5], line_no, "bb_height");
        const double conf = parse_real_field(fields[6], line_no, "conf");

        if (width <= 0.0 || height <= 0.0) {
            throw NonPositiveSizeError("line " + std::to_string(line_no) +
                                       ": bounding box size must be positive, got " +
                                       std::to_string(width) + "x" + std::to_string(height));
        }
        if (frame < 0) throw ParseError(line_no, "frame must be >= 0");
        if (id <= 0) throw ParseError(line_no, "id must be >= 1");
        if (!(conf >= 0.0 && conf <= 1.0)) throw ParseError(line_no, "conf must lie in [0, 1]");

        rows.push_back({frame, id, BoundingBox(left, top, width, height), conf});
    }
    return rows;
}

std::string write_mot(const TrackSet& ts) {
    std::string out;
    char buf[256];
    for (const RowRef& r : canonical_rows(ts)) {
        const BoxObservation& o = r.tracklet->observations()[r.index];
        std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%.2f,%.2f,%.2f,%.2f,-1,-1,-1\n", r.frame,
                      r.id, o.box.left, o.box.top, o.box.width, o.box.height, o.confidence);
        out += buf;
    }
    return out;
}

EmbeddingTable read_embeddings(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 4 &&
        !std::equal(bytes.begin(), bytes.begin() + 4, std::begin(kMagic),
                    [](std::uint8_t b, char c) { return b == static_cast<std::uint8_t>(c); })) {
        throw BadMagicError("embedding file does not start with GTAE");
    }
    if (bytes.size() < kHeaderBytes) {
        throw TruncatedFileError("embedding file shorter than its 16-byte header");
    }
    const std::uint32_t version = read_u32le(bytes.data() + 4);
    if (version != kFormatVersion) {
        throw UnsupportedVersionError("embedding file version " + std::to_string(version) +
                                      ", expected " + std::to_string(kFormatVersion));
    }
    EmbeddingTable table;
    table.count = read_u32le(bytes.data() + 8);
    table.dim = read_u32le(bytes.data() + 12);

    const std::uint64_t expected =
        kHeaderBytes + 4ull * static_cast<std::uint64_t>(table.count) * table.dim;
    if (bytes.size() != expected) {
        throw TruncatedFileError("embedding file is " + std::to_string(bytes.size()) +
                                 " bytes, header implies " + std::to_string(expected));
    }

    const std::size_t n = static_cast<std::size_t>(table.count) * table.dim;
    table.values.reserve(n);
    const std::uint8_t* p = bytes.data() + kHeaderBytes;
    for (std::size_t i = 0; i < n; ++i, p += 4) {
        table.values.push_back(std::bit_cast<float>(read_u32le(p)));
    }
    return table;
}

std::vector<std::uint8_t> write_embeddings(const EmbeddingTable& table) {
    if (table.values.size() != static_cast<std::size_t>(table.count) * table.dim) {
        throw Error("embedding table has " + std::to_string(table.values.size()) +
                    " values, header implies " +
                    std::to_string(static_cast<std::size_t>(table.count) * table.dim));
    }
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderBytes + 4 * table.values.size());
    for (char c : kMagic) out.push_back(static_cast<std::uint8_t>(c));
    append_u32le(out, kFormatVersion);
    append_u32le(out, table.count);
    append_u32le(out, table.dim);
    for (float f : table.values) append_u32le(out, std::bit_cast<std::uint32_t>(f));
    return out;
}

EmbeddingTable embedding_table_of(const TrackSet& ts) {
    EmbeddingTable table;
    table.dim = static_cast<std::uint32_t>(ts.dim());
    for (const RowRef& r : canonical_rows(ts)) {
        const Embedding& e = r.tracklet->embeddings()[r.index];
        for (std::size_t k = 0; k < e.dim(); ++k) {
            table.values.push_back(static_cast<float>(e[k]));
        }
        ++table.count;
    }
    return table;
}

TrackSet assemble_trackset(std::span<const MotRow> rows, const EmbeddingTable& table,
                           std::string sequence_name) {
    if (rows.size() != table.count) {
        throw CountMismatchError("tracking file has " + std::to_string(rows.size()) +
                                 " rows, embedding file has " + std::to_string(table.count));
    }

    std::map<int, std::vector<std::size_t>> by_id;
    for (std::size_t i = 0; i < rows.size(); ++i) by_id[rows[i].id].push_back(i);

    std::vector<Tracklet> tracklets;
    tracklets.reserve(by_id.size());
    for (auto& [id, indices] : by_id) {
        std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
            return rows[a].frame < rows[b].frame;
        });
        std::vector<BoxObservation> obs;
        std::vector<Embedding> emb;
        obs.reserve(indices.size());
        emb.reserve(indices.size());
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const MotRow& row = rows[indices[k]];
            if (k > 0 && rows[indices[k - 1]].frame == row.frame) {
                throw DuplicateFramePerIdError("id " + std::to_string(id) +
                                               " has two boxes on frame " +
                                               std::to_string(row.frame));
            }
            obs.emplace_back(row.frame, row.box, row.confidence);
            const auto floats = table.row(indices[k]);
            std::vector<double> values(floats.begin(), floats.end());
            emb.push_back(normalize_embedding(values));
        }
        tracklets.emplace_back(id, std::move(obs), std::move(emb));
    }
    return TrackSet(std::move(sequence_name), std::move(tracklets));
}

TrackSet quantize_to_output_precision(const TrackSet& ts) {
    std::vector<Tracklet> out;
    out.reserve(ts.size());
    for (const Tracklet& t : ts.tracklets()) {
        std::vector<BoxObservation> obs;
        obs.reserve(t.length());
        for (const BoxObservation& o : t.observations()) {
            const double w = round_two_decimals(o.box.width);
            const double h = round_two_decimals(o.box.height);
            if (w <= 0.0 || h <= 0.0) {
                throw NonPositiveSizeError(
                    "box of id " + std::to_string(t.id()) + " on frame " +
                    std::to_string(o.frame) + " collapses at two-decimal precision");
            }
            obs.emplace_back(o.frame,
                             BoundingBox(round_two_decimals(o.box.left),
                                         round_two_decimals(o.box.top), w, h),
                             round_two_decimals(o.confidence));
        }
        out.emplace_back(t.id(), std::move(obs), t.embeddings());
    }
    return TrackSet(ts.sequence_name(), std::move(out));
}

}  // namespace trackref
