#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "openlex/ingest/fetch.hpp"
#include "openlex/model/source.hpp"
#include "openlex/store/store.hpp"

namespace openlex::ingest {

/// A document located on a source but not yet fetched.
struct DocumentStub {
  std::string dataset;
  std::string citation;
  std::string name;
  std::optional<Date> date;
  std::string url;  // fetch location: http(s) URL, file:// URL or local path
  Language language = Language::kEn;
  std::string identifier;  // stored as the record url instead of `url` when set

  bool operator==(const DocumentStub&) const = default;
};

/// Why an item was skipped or failed. `item` is a row number, feed item id,
/// URL or file name.
struct Note {
  std::string item;
  std::string code;
  std::string message;
};

/// First match of `pattern` in `text` with whitespace collapsed; empty when
/// the pattern is empty or does not match.
std::string find_citation(std::string_view text, const std::string& pattern);

struct ListingResult {
  std::vector<DocumentStub> stubs;
  std::vector<Note> skipped;
};

/// Extracts one stub per row matched by the source's row selector. Rows
/// without a citation or link, or with a date that does not parse in the
/// declared format, are skipped with a note. Relative links resolve against
/// the source's listing_url. Throws ParseError on unparseable markup and
/// ConfigError when the source has no row or link selector.
ListingResult parse_listing(std::string_view page, const SourceDescriptor& source);

struct FeedState {
  std::set<std::string> seen;  // item identifiers
  std::optional<Timestamp> last_poll;

  bool operator==(const FeedState&) const = default;
};

FeedState load_feed_state(const std::filesystem::path& path);  // empty state when absent
void save_feed_state(const FeedState& state, const std::filesystem::path& path);

struct FeedPoll {
  std::vector<DocumentStub> stubs;
  std::vector<std::string> ids;  // feed item id of each stub
  FeedState state;
  std::vector<Note> skipped;
  std::size_t already_seen = 0;  // items present in the feed and in the old state
};

/// RSS 2.0, RSS 1.0 and Atom. Items are identified by guid/id, falling back
/// to the link. Returns stubs for unseen items; the new state holds every
/// identifier in the feed plus everything previously seen. The citation is
/// located in the item title (then description) with the source's
/// citation_pattern, and the name is the title with the citation removed.
/// Throws ParseError.
FeedPoll poll_feed(std::string_view feed, const FeedState& state, const SourceDescriptor& source,
                   Timestamp now);

struct LawParse {
  DocumentRecord record;
  std::vector<std::string> warnings;
};

/// Consolidated statute or regulation XML (Justice Canada layout: Statute or
/// Regulation root, Identification, Body of Section elements). One LawSection
/// per top-level Section in document order; the heading is the marginal note
/// and the text includes nested subsections, paragraphs and definitions.
/// The full text joins each section's "label text" with newlines. Throws
/// ParseError on malformed markup.
LawParse parse_law_xml(std::string_view xml, const SourceDescriptor& source, std::string url = {},
                       std::optional<Timestamp> fetched_at = std::nullopt);

/// Hex SHA-256 of the text.
std::string content_digest(std::string_view text);

struct IngestReport {
  std::size_t fetched = 0;  // every stub attempted
  std::size_t new_records = 0;
  std::size_t updated = 0;
  std::size_t duplicate = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  std::vector<Note> notes;
  std::uint64_t snapshot_version = 0;

  bool balanced() const { return fetched == new_records + updated + duplicate + skipped + failed; }
  IngestReport& operator+=(const IngestReport& o);
};

struct IngestOptions {
  std::function<Timestamp()> clock;  // defaults to the system clock
  std::size_t max_parallel_hosts = 4;
};

/// Fetches and normalizes every stub, then commits all new and changed
/// records in one store batch. A stub whose text (per language, by content
/// digest) matches the stored record is a duplicate and is not rewritten.
/// Fetches to distinct hosts run concurrently; wrap `fetcher` in a
/// PoliteFetcher to space fetches to one host.
IngestReport ingest_batch(const std::vector<DocumentStub>& stubs, Fetcher& fetcher, const SourceDescriptor& source,
                          Store& store, const IngestOptions& options = {});

/// Document text from fetched content: HTML is reduced with the source's
/// content selector (whole body when unset), XML and plain text pass through
/// block extraction or unchanged. Throws ParseError or FetchError for
/// unsupported media.
std::string extract_text(const FetchResult& fetched, const SourceDescriptor& source);

/// Imports every document in `dir` that has a sidecar named either
/// "<file>.meta" or "<stem>.meta" holding "key: value" lines (dataset,
/// citation, name, date, language). When `state_path` is given, processed
/// files are recorded there with their digest, and unchanged files are
/// counted duplicate on later runs without touching the store.
IngestReport import_file_drop(const std::filesystem::path& dir, const SourceDescriptor& source, Store& store,
                              const std::optional<std::filesystem::path>& state_path = std::nullopt,
                              const IngestOptions& options = {});

/// Parses every *.xml file under the source's repo_path as a law and commits
/// new or changed records. Unchanged laws are duplicates.
IngestReport sync_law_repo(const SourceDescriptor& source, Store& store, const IngestOptions& options = {});

/// Listing channel: fetch the listing page, then ingest every row.
IngestReport run_listing(const SourceDescriptor& source, Fetcher& fetcher, Store& store,
                         const IngestOptions& options = {});

/// RSS channel: one poll against the state file at `state_path`. Items seen
/// on an earlier poll count as duplicates; items whose fetch failed are left
/// unseen so the next poll retries them.
IngestReport run_feed(const SourceDescriptor& source, Fetcher& fetcher, Store& store,
                      const std::filesystem::path& state_path, const IngestOptions& options = {});

/// Dispatches on the source's channel. Feed and file-drop state files live
/// in `state_dir` as feed-DATASET.json and filedrop-DATASET.json.
IngestReport run_source(const SourceDescriptor& source, Fetcher& fetcher, Store& store,
                        const std::filesystem::path& state_dir, const IngestOptions& options = {});

}  // namespace openlex::ingest
