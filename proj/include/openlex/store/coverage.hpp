#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "openlex/search/tokenizer.hpp"
#include "openlex/store/store.hpp"

namespace openlex {

struct CoverageRow {
  std::string dataset;
  std::optional<Date> earliest;  // absent when no record in the dataset is dated
  std::optional<Date> latest;
  std::uint64_t documents = 0;
  std::uint64_t tokens = 0;

  bool operator==(const CoverageRow&) const = default;
};

struct CoverageTable {
  std::vector<CoverageRow> rows;  // by dataset code
  std::uint64_t total_documents = 0;
  std::uint64_t total_tokens = 0;
  std::string tokenizer;
};

/// One row per dataset; tokens are counted over both languages' full text.
CoverageTable coverage_stats(const CorpusSnapshot& snap, const Tokenizer& tokenizer,
                             std::optional<DocumentKind> kind = std::nullopt);

/// "dataset\tearliest\tlatest\tdocuments\ttokens" lines with a header and a
/// trailing TOTAL line.
std::string coverage_tsv(const CoverageTable& t);

}  // namespace openlex
