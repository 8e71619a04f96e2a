#include "encoding.hpp"

#include <cstring>

#include <zlib.h>

#include "openlex/error.hpp"

namespace openlex::parquet::encoding {

namespace {

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7F) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

std::uint64_t get_varint(std::string_view in, std::size_t& pos) {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    if (pos >= in.size()) throw ParseError("truncated varint", pos);
    auto b = static_cast<std::uint8_t>(in[pos++]);
    v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
    if (!(b & 0x80)) return v;
  }
  throw ParseError("varint too long", pos);
}

}  // namespace

int bit_width(std::uint32_t max_value) {
  int w = 0;
  while (max_value) {
    ++w;
    max_value >>= 1;
  }
  return w;
}

void rle_encode(const std::vector<std::int16_t>& values, int width, std::string& out) {
  const int value_bytes = (width + 7) / 8;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    put_varint(out, static_cast<std::uint64_t>(j - i) << 1);
    auto v = static_cast<std::uint32_t>(values[i]);
    for (int b = 0; b < value_bytes; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
    i = j;
  }
}

std::vector<std::uint32_t> rle_decode(std::string_view data, int width, std::size_t count) {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  if (width == 0) {
    out.assign(count, 0);
    return out;
  }
  const int value_bytes = (width + 7) / 8;
  const std::uint32_t mask = width >= 32 ? 0xFFFFFFFFu : ((1u << width) - 1);
  std::size_t pos = 0;
  while (out.size() < count) {
    if (pos >= data.size()) throw ParseError("truncated RLE data", pos);
    std::uint64_t header = get_varint(data, pos);
    if (header & 1) {
      std::size_t groups = header >> 1;
      std::size_t nbytes = groups * static_cast<std::size_t>(width);
      if (nbytes > data.size() - pos) throw ParseError("truncated bit-packed run", pos);
      std::size_t nvals = groups * 8;
      std::uint64_t acc = 0;
      int bits = 0;
      std::size_t p = pos;
      for (std::size_t k = 0; k < nvals; ++k) {
        while (bits < width) {
          acc |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data[p++])) << bits;
          bits += 8;
        }
        if (out.size() < count) out.push_back(static_cast<std::uint32_t>(acc & mask));
        acc >>= width;
        bits -= width;
      }
      pos += nbytes;
    } else {
      std::size_t run = header >> 1;
      if (static_cast<std::size_t>(value_bytes) > data.size() - pos) throw ParseError("truncated RLE run", pos);
      std::uint32_t v = 0;
      for (int b = 0; b < value_bytes; ++b) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data[pos + b])) << (8 * b);
      pos += value_bytes;
      for (std::size_t k = 0; k < run && out.size() < count; ++k) out.push_back(v & mask);
    }
  }
  return out;
}

std::string snappy_decompress(std::string_view in) {
  std::size_t pos = 0;
  std::uint64_t len = get_varint(in, pos);
  if (len > (std::uint64_t{1} << 32)) throw ParseError("snappy block too large", 0);
  std::string out;
  out.reserve(len);
  auto u8 = [&](std::size_t p) { return static_cast<std::uint8_t>(in[p]); };
  while (pos < in.size()) {
    std::uint8_t tag = u8(pos++);
    std::size_t length = 0;
    std::size_t offset = 0;
    switch (tag & 3) {
      case 0: {
        length = (tag >> 2) + 1;
        if (length > 60) {
          std::size_t extra = length - 60;
          if (pos + extra > in.size()) throw ParseError("truncated snappy literal", pos);
          length = 0;
          for (std::size_t b = 0; b < extra; ++b) length |= static_cast<std::size_t>(u8(pos + b)) << (8 * b);
          length += 1;
          pos += extra;
        }
        if (length > in.size() - pos) throw ParseError("truncated snappy literal", pos);
        out.append(in.substr(pos, length));
        pos += length;
        continue;
      }
      case 1:
        if (pos >= in.size()) throw ParseError("truncated snappy copy", pos);
        length = 4 + ((tag >> 2) & 7);
        offset = (static_cast<std::size_t>(tag >> 5) << 8) | u8(pos++);
        break;
      case 2:
        if (pos + 2 > in.size()) throw ParseError("truncated snappy copy", pos);
        length = (tag >> 2) + 1;
        offset = u8(pos) | (static_cast<std::size_t>(u8(pos + 1)) << 8);
        pos += 2;
        break;
      case 3:
        if (pos + 4 > in.size()) throw ParseError("truncated snappy copy", pos);
        length = (tag >> 2) + 1;
        offset = u8(pos) | (static_cast<std::size_t>(u8(pos + 1)) << 8) |
                 (static_cast<std::size_t>(u8(pos + 2)) << 16) | (static_cast<std::size_t>(u8(pos + 3)) << 24);
        pos += 4;
        break;
    }
    if (offset == 0 || offset > out.size()) throw ParseError("bad snappy copy offset", pos);
    std::size_t from = out.size() - offset;
    for (std::size_t k = 0; k < length; ++k) out.push_back(out[from + k]);
  }
  if (out.size() != len) throw ParseError("snappy length mismatch", pos);
  return out;
}

std::string gzip_decompress(std::string_view in, std::size_t expected_size) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw Error("zlib init failed");
  std::string out(expected_size, '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) throw ParseError("gzip page does not inflate", zs.total_in);
  out.resize(produced);
  return out;
}

}  // namespace openlex::parquet::encoding
