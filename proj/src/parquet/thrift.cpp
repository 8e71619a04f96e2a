#include "thrift.hpp"

#include <cstring>

#include "openlex/error.hpp"

namespace openlex::parquet::thrift {

namespace {

constexpr int kMaxDepth = 64;

class Reader {
 public:
  Reader(std::string_view buf, std::size_t& pos) : buf_(buf), pos_(pos) {}

  Value read_struct(int depth) {
    if (depth > kMaxDepth) throw ParseError("thrift nesting too deep", pos_);
    Value v;
    v.type = Type::kStruct;
    std::int16_t last = 0;
    for (;;) {
      std::uint8_t h = byte();
      if (h == 0) break;
      auto t = static_cast<Type>(h & 0x0F);
      std::int16_t delta = static_cast<std::int16_t>(h >> 4);
      std::int16_t id = delta ? static_cast<std::int16_t>(last + delta)
                              : static_cast<std::int16_t>(unzigzag(varint()));
      last = id;
      Value f;
      if (t == Type::kTrue || t == Type::kFalse) {
        f.type = t;
        f.i = t == Type::kTrue ? 1 : 0;
      } else {
        f = read_value(t, depth + 1);
      }
      v.fields[id] = std::move(f);
    }
    return v;
  }

 private:
  Value read_value(Type t, int depth) {
    Value v;
    v.type = t;
    switch (t) {
      case Type::kTrue:
      case Type::kFalse:
        // Booleans inside collections occupy one byte.
        v.i = byte() == 1 ? 1 : 0;
        break;
      case Type::kByte:
        v.i = static_cast<std::int8_t>(byte());
        break;
      case Type::kI16:
      case Type::kI32:
      case Type::kI64:
        v.i = unzigzag(varint());
        break;
      case Type::kDouble: {
        need(8);
        std::memcpy(&v.d, buf_.data() + pos_, 8);
        pos_ += 8;
        break;
      }
      case Type::kBinary: {
        std::uint64_t n = varint();
        need(n);
        v.bin.assign(buf_.substr(pos_, n));
        pos_ += n;
        break;
      }
      case Type::kList:
      case Type::kSet: {
        std::uint8_t h = byte();
        std::uint64_t n = h >> 4;
        auto et = static_cast<Type>(h & 0x0F);
        if (n == 15) n = varint();
        if (n > buf_.size()) throw ParseError("thrift list too long", pos_);
        v.list.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) v.list.push_back(read_value(et, depth + 1));
        break;
      }
      case Type::kMap: {
        std::uint64_t n = varint();
        if (n == 0) break;
        std::uint8_t kt = byte();
        for (std::uint64_t i = 0; i < n; ++i) {
          v.list.push_back(read_value(static_cast<Type>(kt >> 4), depth + 1));
          v.list.push_back(read_value(static_cast<Type>(kt & 0x0F), depth + 1));
        }
        break;
      }
      case Type::kStruct:
        return read_struct(depth);
      default:
        throw ParseError("unknown thrift type " + std::to_string(static_cast<int>(t)), pos_);
    }
    return v;
  }

  void need(std::uint64_t n) {
    if (n > buf_.size() - pos_) throw ParseError("truncated thrift data", pos_);
  }
  std::uint8_t byte() {
    need(1);
    return static_cast<std::uint8_t>(buf_[pos_++]);
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      std::uint8_t b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if (!(b & 0x80)) return v;
    }
    throw ParseError("varint too long", pos_);
  }
  static std::int64_t unzigzag(std::uint64_t v) {
    return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
  }

  std::string_view buf_;
  std::size_t& pos_;
};

}  // namespace

Value read_struct(std::string_view buf, std::size_t& pos) {
  return Reader(buf, pos).read_struct(0);
}

}  // namespace openlex::parquet::thrift
