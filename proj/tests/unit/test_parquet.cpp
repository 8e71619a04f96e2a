#include "doctest.h"

#include <cstdlib>
#include <random>

#include "openlex/error.hpp"
#include "openlex/parquet/parquet.hpp"
#include "../../src/parquet/encoding.hpp"
#include "test_support.hpp"

using namespace openlex;
using namespace openlex::parquet;

namespace {

Table sample_table() {
  Table t;
  t.fields = {
      SchemaNode::leaf("id", PhysicalType::kInt64, Repetition::kRequired),
      SchemaNode::leaf("name", PhysicalType::kByteArray, Repetition::kOptional, Logical::kString),
      SchemaNode::group("tags", Repetition::kOptional,
                        {SchemaNode::group("list", Repetition::kRepeated,
                                           {SchemaNode::leaf("element", PhysicalType::kByteArray,
                                                             Repetition::kRequired, Logical::kString)})},
                        Logical::kList),
  };
  t.num_rows = 3;
  t.columns = leaf_layout(t.fields);
  t.columns[0].data.values = std::vector<std::int64_t>{10, 20, 30};
  t.columns[1].data.def_levels = {1, 0, 1};
  t.columns[1].data.values = std::vector<std::string>{"a", "c"};
  // rows: ["x","y"], null, []
  t.columns[2].data.def_levels = {2, 2, 0, 1};
  t.columns[2].data.rep_levels = {0, 1, 0, 0};
  t.columns[2].data.values = std::vector<std::string>{"x", "y"};
  t.metadata = {{"k", "v"}};
  return t;
}

}  // namespace

TEST_CASE("leaf layout computes levels") {
  auto t = sample_table();
  REQUIRE(t.columns.size() == 3);
  CHECK(t.columns[0].max_def == 0);
  CHECK(t.columns[1].max_def == 1);
  CHECK(t.columns[2].max_def == 2);
  CHECK(t.columns[2].max_rep == 1);
  CHECK(t.columns[2].dotted_path() == "tags.list.element");
}

TEST_CASE("write then read reproduces values, levels and metadata") {
  auto t = sample_table();
  auto back = read_buffer(write_buffer(t));
  CHECK(back.num_rows == 3);
  REQUIRE(back.columns.size() == 3);
  CHECK(std::get<std::vector<std::int64_t>>(back.columns[0].data.values) == std::vector<std::int64_t>{10, 20, 30});
  CHECK(back.columns[1].data.def_levels == t.columns[1].data.def_levels);
  CHECK(std::get<std::vector<std::string>>(back.columns[1].data.values) == std::vector<std::string>{"a", "c"});
  CHECK(back.columns[2].data.def_levels == t.columns[2].data.def_levels);
  CHECK(back.columns[2].data.rep_levels == t.columns[2].data.rep_levels);
  CHECK(back.columns[2].logical == Logical::kString);
  CHECK(back.metadata == t.metadata);
}

TEST_CASE("large columns split into several pages") {
  Table t;
  t.fields = {SchemaNode::leaf("s", PhysicalType::kByteArray, Repetition::kOptional, Logical::kString)};
  t.columns = leaf_layout(t.fields);
  std::vector<std::string> vals;
  std::mt19937 rng(3);
  for (int i = 0; i < 3000; ++i) {
    t.columns[0].data.def_levels.push_back(i % 7 == 0 ? 0 : 1);
    if (i % 7 != 0) vals.push_back(std::string(1000 + rng() % 200, static_cast<char>('a' + i % 26)));
  }
  t.num_rows = 3000;
  t.columns[0].data.values = vals;
  auto back = read_buffer(write_buffer(t));
  CHECK(std::get<std::vector<std::string>>(back.columns[0].data.values) == vals);
  CHECK(back.columns[0].data.def_levels == t.columns[0].data.def_levels);
}

TEST_CASE("rle/bit-packed hybrid round trip") {
  std::vector<std::int16_t> levels;
  std::mt19937 rng(11);
  for (int i = 0; i < 5000; ++i) levels.push_back(static_cast<std::int16_t>(rng() % 4 == 0 ? rng() % 4 : 3));
  std::string enc;
  encoding::rle_encode(levels, 2, enc);
  auto dec = encoding::rle_decode(enc, 2, levels.size());
  REQUIRE(dec.size() == levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) REQUIRE(dec[i] == static_cast<std::uint32_t>(levels[i]));
}

TEST_CASE("bit-packed runs decode") {
  // header (1 group << 1) | 1, then 8 values of width 3: 0..7
  std::string s;
  s.push_back(static_cast<char>((1 << 1) | 1));
  std::uint32_t bits = 0;
  for (std::uint32_t v = 0; v < 8; ++v) bits |= v << (3 * v);
  for (int b = 0; b < 3; ++b) s.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
  auto dec = encoding::rle_decode(s, 3, 8);
  CHECK(dec == std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("snappy decompression of a hand-built stream") {
  // literal "abcd", then copy offset 4 length 8 -> "abcdabcdabcd"
  std::string s;
  s.push_back(12);             // uncompressed length varint
  s.push_back(3 << 2);         // literal, length 4
  s += "abcd";
  s.push_back(static_cast<char>(((8 - 4) << 2) | 1));  // copy-1, len 8, offset high bits 0
  s.push_back(4);
  CHECK(encoding::snappy_decompress(s) == "abcdabcdabcd");
}

TEST_CASE("malformed files raise parse errors") {
  CHECK_THROWS_AS(read_buffer("not parquet"), ParseError);
  std::string good = write_buffer(sample_table());
  std::string truncated = good.substr(0, good.size() / 2) + good.substr(good.size() - 8);
  CHECK_THROWS(read_buffer(truncated));
}
