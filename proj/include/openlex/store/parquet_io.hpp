#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "openlex/model/validate.hpp"
#include "openlex/parquet/parquet.hpp"
#include "openlex/search/tokenizer.hpp"
#include "openlex/store/store.hpp"

namespace openlex {

/// Column names of the published tables, in file order.
const std::vector<std::string>& case_columns();
const std::vector<std::string>& law_columns();

/// Parquet schema of the cases or laws table.
std::vector<parquet::SchemaNode> corpus_schema(DocumentKind kind);
/// Shreds records (all of `kind`) into a table ready for parquet::write_file.
parquet::Table records_to_table(const std::vector<const DocumentRecord*>& records, DocumentKind kind);

/// Reassembles rows. Throws SchemaError naming every missing or
/// incompatible column.
std::vector<DocumentRecord> table_to_records(const parquet::Table& table, DocumentKind kind);

struct ExportedFile {
  std::string path;  // relative to the export directory, '/' separated
  std::int64_t rows = 0;
  std::uintmax_t bytes = 0;
};

struct ExportManifest {
  std::filesystem::path dir;
  std::uint64_t snapshot_version = 0;
  std::vector<ExportedFile> files;  // cases file, laws file, card
};

/// Writes cases/cases-00000.parquet, laws/laws-00000.parquet and README.md
/// (a dataset card with YAML front matter: configs, counts, date range,
/// license summary, tokenizer used for the token counts, snapshot version).
/// Throws IoError when the directory cannot be written.
ExportManifest export_parquet(const CorpusSnapshot& snap, const std::filesystem::path& out_dir,
                              const Tokenizer& tokenizer = WordTokenizer());

struct RejectedRow {
  std::string file;  // relative path
  std::int64_t row = 0;
  std::string key;
  std::vector<Violation> violations;
};

struct LoadResult {
  SnapshotPtr snapshot;
  std::vector<RejectedRow> rejected;
};

/// Reads every cases/*.parquet and laws/*.parquet under `dir`. Rows that fail
/// validation (or repeat an earlier key) are reported and skipped. The
/// snapshot version comes from the files' metadata, falling back to 0.
LoadResult load_parquet(const std::filesystem::path& dir);

}  // namespace openlex
