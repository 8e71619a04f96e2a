#pragma once

// Thrift compact protocol, the encoding of Parquet metadata.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace openlex::parquet::thrift {

enum class Type : std::uint8_t {
  kStop = 0,
  kTrue = 1,
  kFalse = 2,
  kByte = 3,
  kI16 = 4,
  kI32 = 5,
  kI64 = 6,
  kDouble = 7,
  kBinary = 8,
  kList = 9,
  kSet = 10,
  kMap = 11,
  kStruct = 12,
};

class Writer {
 public:
  std::string& buffer() { return buf_; }

  void begin_struct() { last_id_.push_back(0); }
  void end_struct() {
    buf_.push_back(0);
    last_id_.pop_back();
  }

  void field_i32(std::int16_t id, std::int32_t v) {
    field_header(id, Type::kI32);
    varint(zigzag(v));
  }
  void field_i64(std::int16_t id, std::int64_t v) {
    field_header(id, Type::kI64);
    varint(zigzag(v));
  }
  void field_bool(std::int16_t id, bool v) { field_header(id, v ? Type::kTrue : Type::kFalse); }
  void field_binary(std::int16_t id, std::string_view v) {
    field_header(id, Type::kBinary);
    binary(v);
  }
  void field_struct(std::int16_t id) {
    field_header(id, Type::kStruct);
    begin_struct();
  }
  void field_list(std::int16_t id, Type elem, std::size_t size) {
    field_header(id, Type::kList);
    list_header(elem, size);
  }

  // List elements.
  void elem_i32(std::int32_t v) { varint(zigzag(v)); }
  void elem_binary(std::string_view v) { binary(v); }

 private:
  static std::uint64_t zigzag(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
  }
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      buf_.push_back(static_cast<char>((v & 0x7F) | 0x80));
      v >>= 7;
    }
    buf_.push_back(static_cast<char>(v));
  }
  void binary(std::string_view v) {
    varint(v.size());
    buf_.append(v);
  }
  void field_header(std::int16_t id, Type t) {
    std::int16_t delta = static_cast<std::int16_t>(id - last_id_.back());
    if (delta > 0 && delta <= 15) {
      buf_.push_back(static_cast<char>((delta << 4) | static_cast<std::uint8_t>(t)));
    } else {
      buf_.push_back(static_cast<char>(t));
      varint(zigzag(id));
    }
    last_id_.back() = id;
  }
  void list_header(Type elem, std::size_t size) {
    if (size < 15) {
      buf_.push_back(static_cast<char>((size << 4) | static_cast<std::uint8_t>(elem)));
    } else {
      buf_.push_back(static_cast<char>(0xF0 | static_cast<std::uint8_t>(elem)));
      varint(size);
    }
  }

  std::string buf_;
  std::vector<std::int16_t> last_id_;
};

/// Generic decoded value; enough to navigate any Parquet metadata struct.
struct Value {
  Type type = Type::kStop;
  std::int64_t i = 0;  // bool, byte, i16, i32, i64
  double d = 0;
  std::string bin;
  std::vector<Value> list;                    // list / set elements
  std::map<std::int16_t, Value> fields;       // struct fields by id

  const Value* field(std::int16_t id) const {
    auto it = fields.find(id);
    return it == fields.end() ? nullptr : &it->second;
  }
  std::int64_t int_or(std::int16_t id, std::int64_t dflt) const {
    auto* f = field(id);
    return f ? f->i : dflt;
  }
};

/// Decodes one struct starting at `pos`; advances `pos`. Throws ParseError.
Value read_struct(std::string_view buf, std::size_t& pos);

}  // namespace openlex::parquet::thrift
