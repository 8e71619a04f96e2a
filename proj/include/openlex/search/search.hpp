#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "openlex/store/store.hpp"

namespace openlex {

inline constexpr int kMaxPageSize = 200;
inline constexpr std::size_t kSnippetCodepoints = 300;

/// Search criteria; every set field must match. `kind` narrows the corpus
/// but is not a criterion on its own.
struct QuerySpec {
  std::optional<std::string> citation;  // exact after normalization; any citation field
  std::optional<std::string> name;      // folded substring of either name
  std::optional<std::string> text;      // folded terms, all required
  std::optional<Date> date_from;        // inclusive, on the primary date
  std::optional<Date> date_to;
  std::vector<std::string> datasets;    // any of
  std::optional<DocumentKind> kind;
  int page = 1;
  int page_size = 20;

  bool has_criterion() const;
};

/// Throws InvalidQuery when no criterion is set, the page or page size is
/// out of range, the date range is inverted, or a text query has no terms.
void validate_query(const QuerySpec& q);

struct SearchHit {
  RecordKey key;
  DocumentKind kind = DocumentKind::kCase;
  std::string name;
  std::optional<Date> date;
  std::string snippet;  // verbatim from the document text, at most 300 code points
  double score = 0.0;
};

struct SearchPage {
  std::vector<SearchHit> hits;
  std::size_t total = 0;
  int page = 1;
  int page_size = 20;
};

/// Inverted index over both languages' text of every record in a snapshot.
/// Immutable once built.
///
/// Ranking: score = sum over query terms of tf / document length (0 when
/// there is no text criterion); ties by date descending (undated last), then
/// primary citation ascending, then dataset ascending.
class Index {
 public:
  static std::shared_ptr<const Index> build(SnapshotPtr snapshot);

  std::size_t document_count() const { return snap_->size(); }
  std::uint64_t snapshot_version() const { return snap_->version(); }
  const CorpusSnapshot& snapshot() const { return *snap_; }
  const SnapshotPtr& snapshot_ptr() const { return snap_; }

  SearchPage search(const QuerySpec& q) const;
  /// Every matching record index (into snapshot().records()) in rank order.
  std::vector<std::size_t> ranked_matches(const QuerySpec& q) const;
  /// Distinct folded terms.
  std::size_t vocabulary_size() const { return postings_.size(); }

 private:
  struct Posting {
    std::uint32_t doc;
    std::uint32_t tf;
  };

  std::string snippet_for(const DocumentRecord& r, const std::vector<std::string>& terms) const;

  SnapshotPtr snap_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::vector<std::uint32_t> doc_length_;
  std::vector<std::pair<std::string, std::string>> folded_names_;  // en, fr
  std::unordered_map<std::string, std::vector<std::uint32_t>> by_citation_;
};

using IndexPtr = std::shared_ptr<const Index>;

SearchPage search(const Index& index, const QuerySpec& q);

/// Folded query terms in order of first appearance, without repeats.
std::vector<std::string> query_terms(std::string_view text);

/// Keeps an index in step with a store, rebuilding when the store's
/// snapshot version moves. Queries hold the index they started with.
class LiveIndex {
 public:
  explicit LiveIndex(const Store& store) : store_(store) {}
  IndexPtr current() const;

 private:
  const Store& store_;
  mutable std::mutex mutex_;
  mutable IndexPtr index_;
};

/// Follows a store directory that another process writes. The corpus file
/// is re-read when its modification time or size changes.
class DirectoryIndex {
 public:
  explicit DirectoryIndex(std::filesystem::path dir);
  IndexPtr current() const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  mutable IndexPtr index_;
  mutable std::filesystem::file_time_type mtime_{};
  mutable std::uintmax_t size_ = 0;
};

/// Where services get the index for each request.
using IndexSource = std::function<IndexPtr()>;

}  // namespace openlex
