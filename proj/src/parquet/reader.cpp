#include <cstring>
#include <fstream>
#include <sstream>

#include "encoding.hpp"
#include "openlex/error.hpp"
#include "openlex/parquet/parquet.hpp"
#include "thrift.hpp"

namespace openlex::parquet {

namespace {

using Values = decltype(ColumnData::values);

enum PageType { kDataPage = 0, kDictionaryPage = 2, kDataPageV2 = 3 };
enum Encoding { kPlain = 0, kPlainDictionary = 2, kRle = 3, kRleDictionary = 8 };
enum Codec { kUncompressed = 0, kSnappy = 1, kGzip = 2 };

void collect_leaves(const SchemaNode& n, std::vector<std::string>& path, std::vector<Repetition>& reps,
                    std::vector<LeafColumn>& out) {
  path.push_back(n.name);
  reps.push_back(n.repetition);
  if (n.is_leaf()) {
    LeafColumn c;
    c.path = path;
    c.path_repetition = reps;
    c.type = *n.type;
    c.logical = n.logical;
    for (auto r : reps) {
      if (r != Repetition::kRequired) ++c.max_def;
      if (r == Repetition::kRepeated) ++c.max_rep;
    }
    out.push_back(std::move(c));
  } else {
    for (auto& ch : n.children) collect_leaves(ch, path, reps, out);
  }
  path.pop_back();
  reps.pop_back();
}

Logical logical_of(const thrift::Value& el) {
  if (auto* lt = el.field(10)) {
    if (lt->field(1)) return Logical::kString;
    if (lt->field(3)) return Logical::kList;
    if (lt->field(6)) return Logical::kDate;
    if (auto* ts = lt->field(8)) {
      if (auto* unit = ts->field(2)) {
        if (unit->field(1)) return Logical::kTimestampMillis;
        if (unit->field(2)) return Logical::kTimestampMicros;
        if (unit->field(3)) return Logical::kTimestampNanos;
      }
    }
  }
  if (auto* ct = el.field(6)) {
    switch (ct->i) {
      case 0: return Logical::kString;
      case 3: return Logical::kList;
      case 6: return Logical::kDate;
      case 9: return Logical::kTimestampMillis;
      case 10: return Logical::kTimestampMicros;
      default: break;
    }
  }
  return Logical::kNone;
}

SchemaNode build_schema(const std::vector<thrift::Value>& elems, std::size_t& i) {
  if (i >= elems.size()) throw ParseError("schema list ends early", 0);
  const auto& el = elems[i++];
  SchemaNode n;
  auto* name = el.field(4);
  n.name = name ? name->bin : "";
  n.repetition = static_cast<Repetition>(el.int_or(3, 0));
  n.logical = logical_of(el);
  auto kids = el.int_or(5, 0);
  if (auto* t = el.field(1); t && kids == 0) {
    n.type = static_cast<PhysicalType>(t->i);
  } else {
    for (std::int64_t k = 0; k < kids; ++k) n.children.push_back(build_schema(elems, i));
  }
  return n;
}

Values empty_values(PhysicalType t) {
  switch (t) {
    case PhysicalType::kInt32: return std::vector<std::int32_t>{};
    case PhysicalType::kInt64:
    case PhysicalType::kInt96: return std::vector<std::int64_t>{};
    case PhysicalType::kByteArray: return std::vector<std::string>{};
    case PhysicalType::kFloat:
    case PhysicalType::kDouble: return std::vector<double>{};
    case PhysicalType::kBoolean: return std::vector<bool>{};
    default: throw Error("parquet: unsupported physical type " + std::to_string(static_cast<int>(t)));
  }
}

template <typename T>
T get_le(std::string_view s, std::size_t pos) {
  T v;
  std::memcpy(&v, s.data() + pos, sizeof(T));
  return v;
}

// Decodes `n` PLAIN values, appending to `out`. Returns bytes consumed.
std::size_t decode_plain(std::string_view s, PhysicalType t, std::size_t n, Values& out) {
  std::size_t pos = 0;
  auto need = [&](std::size_t k) {
    if (k > s.size() - pos) throw ParseError("truncated PLAIN values", pos);
  };
  switch (t) {
    case PhysicalType::kInt32: {
      auto& v = std::get<std::vector<std::int32_t>>(out);
      need(4 * n);
      for (std::size_t i = 0; i < n; ++i, pos += 4) v.push_back(get_le<std::int32_t>(s, pos));
      break;
    }
    case PhysicalType::kInt64: {
      auto& v = std::get<std::vector<std::int64_t>>(out);
      need(8 * n);
      for (std::size_t i = 0; i < n; ++i, pos += 8) v.push_back(get_le<std::int64_t>(s, pos));
      break;
    }
    case PhysicalType::kInt96: {
      auto& v = std::get<std::vector<std::int64_t>>(out);
      need(12 * n);
      for (std::size_t i = 0; i < n; ++i, pos += 12) {
        auto nanos = get_le<std::int64_t>(s, pos);
        auto julian = get_le<std::int32_t>(s, pos + 8);
        v.push_back((static_cast<std::int64_t>(julian) - 2440588) * 86400LL * 1000000000LL + nanos);
      }
      break;
    }
    case PhysicalType::kFloat: {
      auto& v = std::get<std::vector<double>>(out);
      need(4 * n);
      for (std::size_t i = 0; i < n; ++i, pos += 4) v.push_back(get_le<float>(s, pos));
      break;
    }
    case PhysicalType::kDouble: {
      auto& v = std::get<std::vector<double>>(out);
      need(8 * n);
      for (std::size_t i = 0; i < n; ++i, pos += 8) v.push_back(get_le<double>(s, pos));
      break;
    }
    case PhysicalType::kByteArray: {
      auto& v = std::get<std::vector<std::string>>(out);
      for (std::size_t i = 0; i < n; ++i) {
        need(4);
        auto len = get_le<std::uint32_t>(s, pos);
        pos += 4;
        need(len);
        v.emplace_back(s.substr(pos, len));
        pos += len;
      }
      break;
    }
    case PhysicalType::kBoolean: {
      auto& v = std::get<std::vector<bool>>(out);
      need((n + 7) / 8);
      for (std::size_t i = 0; i < n; ++i)
        v.push_back((static_cast<std::uint8_t>(s[i / 8]) >> (i % 8)) & 1);
      pos = (n + 7) / 8;
      break;
    }
    default:
      throw Error("parquet: unsupported physical type");
  }
  return pos;
}

void append_from_dictionary(const Values& dict, const std::vector<std::uint32_t>& idx, Values& out) {
  std::visit(
      [&](const auto& d) {
        using V = std::decay_t<decltype(d)>;
        auto& o = std::get<V>(out);
        for (auto k : idx) {
          if (k >= d.size()) throw ParseError("dictionary index out of range", 0);
          o.push_back(d[k]);
        }
      },
      dict);
}

std::string decompress(std::string_view data, std::int64_t codec, std::size_t uncompressed) {
  switch (codec) {
    case kUncompressed: return std::string(data);
    case kSnappy: return encoding::snappy_decompress(data);
    case kGzip: return encoding::gzip_decompress(data, uncompressed);
    default: throw Error("parquet: unsupported compression codec " + std::to_string(codec));
  }
}

std::vector<std::int16_t> to_levels(const std::vector<std::uint32_t>& v) {
  return {v.begin(), v.end()};
}

class ChunkReader {
 public:
  ChunkReader(std::string_view file, LeafColumn& col, std::int64_t codec)
      : file_(file), col_(col), codec_(codec) {}

  void read(std::size_t start, std::int64_t num_values) {
    std::size_t pos = start;
    std::int64_t seen = 0;
    while (seen < num_values) {
      if (pos >= file_.size()) throw ParseError("column chunk runs past end of file", pos);
      thrift::Value header = thrift::read_struct(file_, pos);
      auto type = header.int_or(1, -1);
      auto usize = static_cast<std::size_t>(header.int_or(2, 0));
      auto csize = static_cast<std::size_t>(header.int_or(3, 0));
      if (csize > file_.size() - pos) throw ParseError("page runs past end of file", pos);
      std::string_view raw = file_.substr(pos, csize);
      pos += csize;
      if (type == kDictionaryPage) {
        auto* dh = header.field(7);
        if (!dh) throw ParseError("dictionary page without header", pos);
        std::string body = decompress(raw, codec_, usize);
        dict_ = empty_values(col_.type);
        decode_plain(body, col_.type, static_cast<std::size_t>(dh->int_or(1, 0)), *dict_);
      } else if (type == kDataPage) {
        auto* dh = header.field(5);
        if (!dh) throw ParseError("data page without header", pos);
        std::string body = decompress(raw, codec_, usize);
        auto n = static_cast<std::size_t>(dh->int_or(1, 0));
        read_v1(body, n, dh->int_or(2, 0));
        seen += static_cast<std::int64_t>(n);
      } else if (type == kDataPageV2) {
        auto* dh = header.field(8);
        if (!dh) throw ParseError("data page v2 without header", pos);
        read_v2(raw, usize, *dh);
        seen += dh->int_or(1, 0);
      } else {
        // Index pages and unknown page types are skipped.
      }
    }
  }

 private:
  std::string_view levels_v1(std::string_view& body) {
    if (body.size() < 4) throw ParseError("truncated level block", 0);
    auto len = get_le<std::uint32_t>(body, 0);
    if (len > body.size() - 4) throw ParseError("truncated level block", 0);
    std::string_view lv = body.substr(4, len);
    body.remove_prefix(4 + len);
    return lv;
  }

  std::size_t append_levels(std::string_view rep, std::string_view def, std::size_t n) {
    auto& d = col_.data;
    if (col_.max_rep > 0) {
      auto r = to_levels(encoding::rle_decode(rep, encoding::bit_width(col_.max_rep), n));
      d.rep_levels.insert(d.rep_levels.end(), r.begin(), r.end());
    }
    std::size_t present = n;
    if (col_.max_def > 0) {
      auto lv = to_levels(encoding::rle_decode(def, encoding::bit_width(col_.max_def), n));
      present = 0;
      for (auto x : lv)
        if (x == col_.max_def) ++present;
      d.def_levels.insert(d.def_levels.end(), lv.begin(), lv.end());
    }
    return present;
  }

  void decode_values(std::string_view vals, std::size_t present, std::int64_t enc) {
    if (enc == kPlain) {
      decode_plain(vals, col_.type, present, col_.data.values);
    } else if (enc == kPlainDictionary || enc == kRleDictionary) {
      if (!dict_) throw ParseError("dictionary-encoded page without dictionary", 0);
      if (present == 0) return;
      if (vals.empty()) throw ParseError("missing dictionary index width", 0);
      int width = static_cast<std::uint8_t>(vals[0]);
      auto idx = encoding::rle_decode(vals.substr(1), width, present);
      append_from_dictionary(*dict_, idx, col_.data.values);
    } else {
      throw Error("parquet: unsupported value encoding " + std::to_string(enc) + " in column " +
                  col_.dotted_path());
    }
  }

  void read_v1(std::string_view body, std::size_t n, std::int64_t enc) {
    std::string_view rep, def;
    if (col_.max_rep > 0) rep = levels_v1(body);
    if (col_.max_def > 0) def = levels_v1(body);
    std::size_t present = append_levels(rep, def, n);
    decode_values(body, present, enc);
  }

  void read_v2(std::string_view raw, std::size_t usize, const thrift::Value& dh) {
    auto n = static_cast<std::size_t>(dh.int_or(1, 0));
    auto def_len = static_cast<std::size_t>(dh.int_or(5, 0));
    auto rep_len = static_cast<std::size_t>(dh.int_or(6, 0));
    bool compressed = dh.int_or(7, 1) != 0;
    if (rep_len + def_len > raw.size()) throw ParseError("level lengths exceed page", 0);
    std::string_view rep = raw.substr(0, rep_len);
    std::string_view def = raw.substr(rep_len, def_len);
    std::string_view rest = raw.substr(rep_len + def_len);
    std::size_t present = append_levels(rep, def, n);
    std::string vals = compressed ? decompress(rest, codec_, usize - rep_len - def_len) : std::string(rest);
    decode_values(vals, present, dh.int_or(4, 0));
  }

  std::string_view file_;
  LeafColumn& col_;
  std::int64_t codec_;
  std::optional<Values> dict_;
};

}  // namespace

std::string LeafColumn::dotted_path() const {
  std::string s;
  for (auto& p : path) {
    if (!s.empty()) s += '.';
    s += p;
  }
  return s;
}

std::int16_t LeafColumn::def_level_at(std::size_t depth) const {
  std::int16_t d = 0;
  for (std::size_t i = 0; i < depth && i < path_repetition.size(); ++i)
    if (path_repetition[i] != Repetition::kRequired) ++d;
  return d;
}

std::vector<LeafColumn> leaf_layout(const std::vector<SchemaNode>& fields) {
  std::vector<LeafColumn> out;
  std::vector<std::string> path;
  std::vector<Repetition> reps;
  for (auto& f : fields) collect_leaves(f, path, reps, out);
  return out;
}

Table read_buffer(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "PAR1" || bytes.substr(bytes.size() - 4) != "PAR1")
    throw ParseError("not a parquet file (missing PAR1 magic)", 0);
  auto meta_len = get_le<std::uint32_t>(bytes, bytes.size() - 8);
  if (meta_len > bytes.size() - 12) throw ParseError("footer length out of range", bytes.size() - 8);
  std::size_t pos = bytes.size() - 8 - meta_len;
  thrift::Value meta = thrift::read_struct(bytes, pos);

  Table t;
  auto* schema = meta.field(2);
  if (!schema || schema->list.empty()) throw ParseError("file has no schema", pos);
  std::size_t i = 0;
  SchemaNode root = build_schema(schema->list, i);
  t.fields = std::move(root.children);
  t.num_rows = meta.int_or(3, 0);
  t.columns = leaf_layout(t.fields);
  for (auto& c : t.columns) c.data.values = empty_values(c.type);

  if (auto* groups = meta.field(4)) {
    for (auto& rg : groups->list) {
      auto* chunks = rg.field(1);
      if (!chunks || chunks->list.size() != t.columns.size())
        throw ParseError("row group column count does not match schema", 0);
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        auto* md = chunks->list[c].field(3);
        if (!md) throw ParseError("column chunk without metadata", 0);
        auto data_off = md->int_or(9, 0);
        auto dict_off = md->int_or(11, 0);
        std::int64_t start = (dict_off > 0 && dict_off < data_off) ? dict_off : data_off;
        if (start < 4 || static_cast<std::size_t>(start) >= bytes.size())
          throw ParseError("column chunk offset out of range", 0);
        ChunkReader(bytes, t.columns[c], md->int_or(4, 0))
            .read(static_cast<std::size_t>(start), md->int_or(5, 0));
      }
    }
  }

  if (auto* kv = meta.field(5)) {
    for (auto& e : kv->list) {
      auto* k = e.field(1);
      auto* v = e.field(2);
      t.metadata.emplace_back(k ? k->bin : "", v ? v->bin : "");
    }
  }
  return t;
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return read_buffer(ss.str());
}

}  // namespace openlex::parquet
