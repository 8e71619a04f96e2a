#pragma once

// Minimal Apache Parquet support: enough to publish the corpus tables and to
// read them back (including files written by other tools with the same
// schema).
//
// Writing: one row group, PLAIN values, RLE levels, data page v1,
// uncompressed. Reading: PLAIN and dictionary encodings, data page v1 and
// v2, UNCOMPRESSED / SNAPPY / GZIP codecs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace openlex::parquet {

enum class PhysicalType : std::int32_t {
  kBoolean = 0,
  kInt32 = 1,
  kInt64 = 2,
  kInt96 = 3,
  kFloat = 4,
  kDouble = 5,
  kByteArray = 6,
  kFixedLenByteArray = 7,
};

enum class Repetition : std::int32_t { kRequired = 0, kOptional = 1, kRepeated = 2 };

enum class Logical {
  kNone,
  kString,
  kDate,             // INT32 days since epoch
  kTimestampMillis,  // INT64, UTC-adjusted
  kTimestampMicros,
  kTimestampNanos,
  kList,
};

struct SchemaNode {
  std::string name;
  Repetition repetition = Repetition::kOptional;
  std::optional<PhysicalType> type;  // set on leaves only
  Logical logical = Logical::kNone;
  std::vector<SchemaNode> children;

  bool is_leaf() const { return type.has_value(); }

  static SchemaNode leaf(std::string name, PhysicalType t, Repetition r, Logical l = Logical::kNone) {
    SchemaNode n;
    n.name = std::move(name);
    n.type = t;
    n.repetition = r;
    n.logical = l;
    return n;
  }
  static SchemaNode group(std::string name, Repetition r, std::vector<SchemaNode> kids,
                          Logical l = Logical::kNone) {
    SchemaNode n;
    n.name = std::move(name);
    n.repetition = r;
    n.logical = l;
    n.children = std::move(kids);
    return n;
  }
};

/// Shredded values of one leaf column. `values` holds only non-null entries;
/// the level vectors hold one entry per slot (empty when the max level is 0).
/// INT96 values are converted to INT64 nanoseconds on read.
struct ColumnData {
  std::vector<std::int16_t> def_levels;
  std::vector<std::int16_t> rep_levels;
  std::variant<std::vector<std::int32_t>, std::vector<std::int64_t>, std::vector<std::string>,
               std::vector<double>, std::vector<bool>>
      values;
};

struct LeafColumn {
  std::vector<std::string> path;  // names from the top-level field down to the leaf
  /// Repetition of each node on the path (same length as `path`).
  std::vector<Repetition> path_repetition;
  PhysicalType type = PhysicalType::kByteArray;
  Logical logical = Logical::kNone;
  std::int16_t max_def = 0;
  std::int16_t max_rep = 0;
  ColumnData data;

  std::string dotted_path() const;
  /// Definition level reached once the first `depth` path nodes are defined.
  std::int16_t def_level_at(std::size_t depth) const;
};

using KeyValueMetadata = std::vector<std::pair<std::string, std::string>>;

struct Table {
  std::vector<SchemaNode> fields;  // top-level fields
  std::int64_t num_rows = 0;
  std::vector<LeafColumn> columns;  // leaves in schema order
  KeyValueMetadata metadata;
};

/// Leaves of `fields` in schema order with their path, levels and types.
std::vector<LeafColumn> leaf_layout(const std::vector<SchemaNode>& fields);

/// Writes `table` (fields, num_rows, columns[].data, metadata). Column order
/// must match leaf_layout(fields). Throws IoError on write failure and
/// Error on inconsistent input.
void write_file(const std::filesystem::path& path, const Table& table);
std::string write_buffer(const Table& table);

/// Throws IoError when unreadable, ParseError on malformed content, Error on
/// unsupported features (codec, encoding).
Table read_file(const std::filesystem::path& path);
Table read_buffer(std::string_view bytes);

}  // namespace openlex::parquet
