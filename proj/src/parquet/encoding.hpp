#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace openlex::parquet::encoding {

/// Bits needed to represent values in [0, max_value].
int bit_width(std::uint32_t max_value);

/// RLE/bit-packed hybrid. The writer emits RLE runs only.
void rle_encode(const std::vector<std::int16_t>& values, int width, std::string& out);
std::vector<std::uint32_t> rle_decode(std::string_view data, int width, std::size_t count);

std::string snappy_decompress(std::string_view in);
std::string gzip_decompress(std::string_view in, std::size_t expected_size);

}  // namespace openlex::parquet::encoding
