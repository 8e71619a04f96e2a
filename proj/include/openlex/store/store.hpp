#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "openlex/model/record.hpp"
#include "openlex/model/validate.hpp"

namespace openlex {

using RecordPtr = std::shared_ptr<const DocumentRecord>;

/// Immutable corpus state. Records are ordered by key; lookups accept the
/// citation in either language.
class CorpusSnapshot {
 public:
  CorpusSnapshot() = default;
  /// Records must already have unique keys; they are sorted here.
  CorpusSnapshot(std::vector<RecordPtr> records, std::uint64_t version);
  static std::shared_ptr<const CorpusSnapshot> make(std::vector<DocumentRecord> records,
                                                    std::uint64_t version);

  std::uint64_t version() const { return version_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<RecordPtr>& records() const { return records_; }

  const DocumentRecord* find(std::string_view dataset, std::string_view citation) const;
  /// Index into records() of the record holding `citation` (either language).
  std::optional<std::size_t> index_of(std::string_view dataset, std::string_view citation) const;
  bool has_dataset(std::string_view dataset) const;
  std::vector<std::string> datasets() const;

  /// Same records and version.
  bool operator==(const CorpusSnapshot& o) const;

 private:
  std::vector<RecordPtr> records_;
  std::uint64_t version_ = 0;
  std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> by_citation_;
};

using SnapshotPtr = std::shared_ptr<const CorpusSnapshot>;

struct ScanFilter {
  std::optional<std::string> dataset;
  std::optional<DocumentKind> kind;
  std::optional<Date> from;  // inclusive; undated records never match a date bound
  std::optional<Date> to;    // inclusive

  bool matches(const DocumentRecord& r) const;
};

/// Matching records in (dataset, date, citation) order.
std::vector<DocumentRecord> scan(const CorpusSnapshot& snap, const ScanFilter& filter = {});
std::vector<const DocumentRecord*> scan_refs(const CorpusSnapshot& snap, const ScanFilter& filter = {});

struct RowViolations {
  std::size_t index = 0;  // position in the input batch
  std::string key;
  std::vector<Violation> violations;
};

struct UpsertReport {
  std::size_t inserted = 0;
  std::size_t updated = 0;
  std::size_t unchanged = 0;
  std::uint64_t version = 0;  // snapshot version after the call
  std::vector<RowViolations> rejected;

  bool accepted() const { return rejected.empty(); }
};

/// A replaced record version.
struct WalEntry {
  std::uint64_t version = 0;  // version of the batch that replaced it
  std::string key;
  DocumentRecord previous;
};

/// Corpus store with one writer at a time and lock-free-for-readers
/// snapshots. With a directory, state lives in:
///   corpus.jsonl  header line {"snapshot_version":N}, then one record per line in key order
///   wal.jsonl     one WalEntry per line, appended before the corpus is replaced
/// A batch that changes nothing is not committed, so the files and version
/// stay as they were.
class Store {
 public:
  /// In-memory store.
  Store();
  /// Opens (creating if needed) a directory-backed store. Throws IoError.
  explicit Store(const std::filesystem::path& dir);
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  SnapshotPtr snapshot() const;

  /// All-or-nothing: when any record fails validation (or its citations hit
  /// two different stored records) nothing is written and every failing row
  /// is reported. Incoming records are matched to stored ones by either
  /// language's citation.
  UpsertReport upsert(std::span<const DocumentRecord> records);

  std::vector<WalEntry> write_log() const;
  const std::optional<std::filesystem::path>& dir() const { return dir_; }

 private:
  void persist(const CorpusSnapshot& next, const std::vector<WalEntry>& replaced);

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex snapshot_mutex_;  // guards current_ only
  SnapshotPtr current_;
  mutable std::mutex writer_mutex_;
  std::vector<WalEntry> memory_wal_;
};

/// Reads a store directory without taking the writer role.
SnapshotPtr load_store_snapshot(const std::filesystem::path& dir);

}  // namespace openlex
