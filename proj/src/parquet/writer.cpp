#include <algorithm>
#include <cstring>
#include <fstream>

#include "encoding.hpp"
#include "openlex/error.hpp"
#include "openlex/parquet/parquet.hpp"
#include "thrift.hpp"

namespace openlex::parquet {

namespace {

constexpr std::size_t kPageTargetBytes = 1 << 20;
constexpr std::int32_t kEncodingPlain = 0;
constexpr std::int32_t kEncodingRle = 3;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

template <typename T>
void put_le(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

std::optional<std::int32_t> converted_type(const SchemaNode& n) {
  switch (n.logical) {
    case Logical::kString: return 0;
    case Logical::kList: return 3;
    case Logical::kDate: return 6;
    case Logical::kTimestampMillis: return 9;
    case Logical::kTimestampMicros: return 10;
    default: return std::nullopt;
  }
}

void write_logical(thrift::Writer& w, const SchemaNode& n) {
  if (n.logical == Logical::kNone) return;
  w.field_struct(10);
  switch (n.logical) {
    case Logical::kString:
      w.field_struct(1);
      w.end_struct();
      break;
    case Logical::kList:
      w.field_struct(3);
      w.end_struct();
      break;
    case Logical::kDate:
      w.field_struct(6);
      w.end_struct();
      break;
    case Logical::kTimestampMillis:
    case Logical::kTimestampMicros:
    case Logical::kTimestampNanos: {
      w.field_struct(8);
      w.field_bool(1, true);
      w.field_struct(2);
      std::int16_t unit = n.logical == Logical::kTimestampMillis   ? 1
                          : n.logical == Logical::kTimestampMicros ? 2
                                                                   : 3;
      w.field_struct(unit);
      w.end_struct();
      w.end_struct();
      w.end_struct();
      break;
    }
    case Logical::kNone:
      break;
  }
  w.end_struct();
}

void write_schema_element(thrift::Writer& w, const SchemaNode& n) {
  w.begin_struct();
  if (n.type) w.field_i32(1, static_cast<std::int32_t>(*n.type));
  w.field_i32(3, static_cast<std::int32_t>(n.repetition));
  w.field_binary(4, n.name);
  if (!n.is_leaf()) w.field_i32(5, static_cast<std::int32_t>(n.children.size()));
  if (auto ct = converted_type(n)) w.field_i32(6, *ct);
  write_logical(w, n);
  w.end_struct();
}

void flatten(const SchemaNode& n, std::vector<const SchemaNode*>& out) {
  out.push_back(&n);
  for (auto& c : n.children) flatten(c, out);
}

std::size_t value_count(const ColumnData& d) {
  return std::visit([](const auto& v) { return v.size(); }, d.values);
}

void check_type(const LeafColumn& c) {
  bool ok = std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        switch (c.type) {
          case PhysicalType::kInt32: return std::is_same_v<V, std::vector<std::int32_t>>;
          case PhysicalType::kInt64: return std::is_same_v<V, std::vector<std::int64_t>>;
          case PhysicalType::kByteArray: return std::is_same_v<V, std::vector<std::string>>;
          case PhysicalType::kDouble: return std::is_same_v<V, std::vector<double>>;
          case PhysicalType::kBoolean: return std::is_same_v<V, std::vector<bool>>;
          default: return false;
        }
      },
      c.data.values);
  if (!ok) throw Error("parquet: value vector does not match the type of column " + c.dotted_path());
}

// PLAIN-encodes values [from, to).
void plain_values(const ColumnData& d, std::size_t from, std::size_t to, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::vector<std::string>>) {
          for (std::size_t i = from; i < to; ++i) {
            put_u32(out, static_cast<std::uint32_t>(v[i].size()));
            out += v[i];
          }
        } else if constexpr (std::is_same_v<V, std::vector<bool>>) {
          std::uint8_t acc = 0;
          int bits = 0;
          for (std::size_t i = from; i < to; ++i) {
            if (v[i]) acc |= static_cast<std::uint8_t>(1u << bits);
            if (++bits == 8) {
              out.push_back(static_cast<char>(acc));
              acc = 0;
              bits = 0;
            }
          }
          if (bits) out.push_back(static_cast<char>(acc));
        } else {
          for (std::size_t i = from; i < to; ++i) put_le(out, v[i]);
        }
      },
      d.values);
}

std::size_t value_size(const ColumnData& d, std::size_t i) {
  return std::visit(
      [&](const auto& v) -> std::size_t {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::vector<std::string>>)
          return 4 + v[i].size();
        else if constexpr (std::is_same_v<V, std::vector<bool>>)
          return 1;
        else
          return sizeof(typename V::value_type);
      },
      d.values);
}

struct ChunkResult {
  std::int64_t num_values = 0;
  std::int64_t size = 0;
};

ChunkResult write_chunk(const LeafColumn& c, std::string& out) {
  const ColumnData& d = c.data;
  std::size_t slots = c.max_def > 0 ? d.def_levels.size()
                      : c.max_rep > 0 ? d.rep_levels.size()
                                      : value_count(d);
  if (c.max_def > 0 && d.def_levels.size() != slots) throw Error("parquet: def level count mismatch");
  if (c.max_rep > 0 && d.rep_levels.size() != slots) throw Error("parquet: rep level count mismatch");
  if (c.max_def == 0 && value_count(d) != slots) throw Error("parquet: value count mismatch");
  if (c.max_def > 0) {
    auto present = static_cast<std::size_t>(
        std::count(d.def_levels.begin(), d.def_levels.end(), c.max_def));
    if (present != value_count(d))
      throw Error("parquet: " + c.dotted_path() + " has " + std::to_string(value_count(d)) +
                  " values for " + std::to_string(present) + " defined slots");
  }

  const int def_width = encoding::bit_width(static_cast<std::uint32_t>(c.max_def));
  const int rep_width = encoding::bit_width(static_cast<std::uint32_t>(c.max_rep));
  std::size_t start = out.size();
  std::size_t slot = 0;
  std::size_t value = 0;
  bool first_page = true;
  while (slot < slots || first_page) {
    first_page = false;
    std::size_t page_begin = slot;
    std::size_t value_begin = value;
    std::size_t bytes = 0;
    while (slot < slots) {
      // Pages end on record boundaries.
      if (slot > page_begin && bytes >= kPageTargetBytes && (c.max_rep == 0 || d.rep_levels[slot] == 0)) break;
      bool present = c.max_def == 0 || d.def_levels[slot] == c.max_def;
      if (present) bytes += value_size(d, value++);
      ++slot;
    }
    std::string body;
    if (c.max_rep > 0) {
      std::vector<std::int16_t> lv(d.rep_levels.begin() + page_begin, d.rep_levels.begin() + slot);
      std::string enc;
      encoding::rle_encode(lv, rep_width, enc);
      put_u32(body, static_cast<std::uint32_t>(enc.size()));
      body += enc;
    }
    if (c.max_def > 0) {
      std::vector<std::int16_t> lv(d.def_levels.begin() + page_begin, d.def_levels.begin() + slot);
      std::string enc;
      encoding::rle_encode(lv, def_width, enc);
      put_u32(body, static_cast<std::uint32_t>(enc.size()));
      body += enc;
    }
    plain_values(d, value_begin, value, body);

    thrift::Writer w;
    w.begin_struct();
    w.field_i32(1, 0);  // DATA_PAGE
    w.field_i32(2, static_cast<std::int32_t>(body.size()));
    w.field_i32(3, static_cast<std::int32_t>(body.size()));
    w.field_struct(5);
    w.field_i32(1, static_cast<std::int32_t>(slot - page_begin));
    w.field_i32(2, kEncodingPlain);
    w.field_i32(3, kEncodingRle);
    w.field_i32(4, kEncodingRle);
    w.end_struct();
    w.end_struct();
    out += w.buffer();
    out += body;
  }
  return {static_cast<std::int64_t>(slots), static_cast<std::int64_t>(out.size() - start)};
}

}  // namespace

std::string write_buffer(const Table& table) {
  auto layout = leaf_layout(table.fields);
  if (layout.size() != table.columns.size())
    throw Error("parquet: expected " + std::to_string(layout.size()) + " columns, got " +
                std::to_string(table.columns.size()));
  for (std::size_t i = 0; i < layout.size(); ++i) {
    layout[i].data = table.columns[i].data;
    check_type(layout[i]);
  }

  std::string out = "PAR1";
  std::vector<std::int64_t> offsets, sizes, counts;
  for (auto& c : layout) {
    offsets.push_back(static_cast<std::int64_t>(out.size()));
    auto r = write_chunk(c, out);
    sizes.push_back(r.size);
    counts.push_back(r.num_values);
  }

  SchemaNode root = SchemaNode::group("schema", Repetition::kRequired, table.fields);
  std::vector<const SchemaNode*> flat;
  flatten(root, flat);

  thrift::Writer w;
  w.begin_struct();
  w.field_i32(1, 1);
  w.field_list(2, thrift::Type::kStruct, flat.size());
  // The root element carries no repetition.
  w.begin_struct();
  w.field_binary(4, root.name);
  w.field_i32(5, static_cast<std::int32_t>(root.children.size()));
  w.end_struct();
  for (std::size_t i = 1; i < flat.size(); ++i) write_schema_element(w, *flat[i]);
  w.field_i64(3, table.num_rows);

  std::int64_t total = 0;
  for (auto s : sizes) total += s;
  w.field_list(4, thrift::Type::kStruct, 1);
  w.begin_struct();
  w.field_list(1, thrift::Type::kStruct, layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& c = layout[i];
    w.begin_struct();
    w.field_i64(2, offsets[i]);
    w.field_struct(3);
    w.field_i32(1, static_cast<std::int32_t>(c.type));
    w.field_list(2, thrift::Type::kI32, 2);
    w.elem_i32(kEncodingPlain);
    w.elem_i32(kEncodingRle);
    w.field_list(3, thrift::Type::kBinary, c.path.size());
    for (auto& p : c.path) w.elem_binary(p);
    w.field_i32(4, 0);  // UNCOMPRESSED
    w.field_i64(5, counts[i]);
    w.field_i64(6, sizes[i]);
    w.field_i64(7, sizes[i]);
    w.field_i64(9, offsets[i]);
    w.end_struct();
    w.end_struct();
  }
  w.field_i64(2, total);
  w.field_i64(3, table.num_rows);
  w.end_struct();

  if (!table.metadata.empty()) {
    w.field_list(5, thrift::Type::kStruct, table.metadata.size());
    for (auto& [k, v] : table.metadata) {
      w.begin_struct();
      w.field_binary(1, k);
      w.field_binary(2, v);
      w.end_struct();
    }
  }
  w.field_binary(6, "openlex parquet writer");
  w.end_struct();

  out += w.buffer();
  put_u32(out, static_cast<std::uint32_t>(w.buffer().size()));
  out += "PAR1";
  return out;
}

void write_file(const std::filesystem::path& path, const Table& table) {
  std::string bytes = write_buffer(table);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace openlex::parquet
