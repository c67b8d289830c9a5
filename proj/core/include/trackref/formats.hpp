#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trackref/types.hpp"

namespace trackref {

/// One line of a tracking results file.
struct MotRow {
    int frame;
    int id;
    BoundingBox box;
    double confidence;
};

/// Parses tracking results text. Each non-empty line is
///   frame,id,bb_left,bb_top,bb_width,bb_height,conf[,x,y,z]
/// with integer frame/id and real remaining fields. Rows are returned in
/// file order, unsorted and undeduplicated.
std::vector<MotRow> parse_mot(std::string_view text);

/// Serializes every observation, sorted by (frame, id), one line each:
///   frame,id,left,top,width,height,conf,-1,-1,-1
/// Reals are printed with two decimal places.
std::string write_mot(const TrackSet& ts);

/// Row-major float32 matrix of appearance features. Row i belongs to line i
/// of the companion tracking file.
struct EmbeddingTable {
    std::uint32_t count = 0;
    std::uint32_t dim = 0;
    std::vector<float> values;  // count * dim entries

    std::span<const float> row(std::size_t i) const {
        return std::span<const float>(values).subspan(i * dim, dim);
    }

    bool operator==(const EmbeddingTable&) const = default;
};

// Embedding file layout (all integers little-endian):
//   bytes  0..3   magic "GTAE"
//   bytes  4..7   format version, uint32, currently 1
//   bytes  8..11  row count, uint32
//   bytes 12..15  dimension, uint32
//   bytes 16..    count*dim IEEE-754 float32 values, row-major
// Total length must equal 16 + 4*count*dim exactly.

EmbeddingTable read_embeddings(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_embeddings(const EmbeddingTable& table);

/// Extracts the embeddings of a TrackSet with rows in write_mot() line order.
EmbeddingTable embedding_table_of(const TrackSet& ts);

/// Groups rows by id into tracklets (sorted by frame), normalizes each
/// embedding, and computes the sequence extents. Row i of the table must
/// correspond to rows[i].
TrackSet assemble_trackset(std::span<const MotRow> rows, const EmbeddingTable& table,
                           std::string sequence_name = "");

/// Rounds every box field and confidence to the two-decimal precision used
/// by write_mot(), leaving embeddings untouched. Applying it twice is a
/// no-op, which makes pipelines that pass through text files reproducible.
TrackSet quantize_to_output_precision(const TrackSet& ts);

}  // namespace trackref
