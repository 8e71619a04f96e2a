#include <chrono>

#include "openlex/error.hpp"
#include "openlex/ingest/ingest.hpp"

namespace openlex::ingest {

namespace {

Timestamp now_from(const IngestOptions& options) {
  if (options.clock) return options.clock();
  return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

void add_skipped(IngestReport& report, const std::vector<Note>& skipped) {
  report.fetched += skipped.size();
  report.skipped += skipped.size();
  report.notes.insert(report.notes.end(), skipped.begin(), skipped.end());
}

}  // namespace

IngestReport run_listing(const SourceDescriptor& source, Fetcher& fetcher, Store& store, const IngestOptions& options) {
  auto page = fetcher.fetch(source.listing_url);
  auto listing = parse_listing(page.body, source);
  auto report = ingest_batch(listing.stubs, fetcher, source, store, options);
  add_skipped(report, listing.skipped);
  return report;
}

IngestReport run_feed(const SourceDescriptor& source, Fetcher& fetcher, Store& store,
                      const std::filesystem::path& state_path, const IngestOptions& options) {
  auto state = load_feed_state(state_path);
  auto feed = fetcher.fetch(source.feed_url);
  auto poll = poll_feed(feed.body, state, source, now_from(options));
  auto report = ingest_batch(poll.stubs, fetcher, source, store, options);
  for (auto& n : report.notes) {
    if (n.code != "fetch_failed") continue;
    for (std::size_t i = 0; i < poll.stubs.size(); ++i)
      if (poll.stubs[i].citation == n.item || poll.stubs[i].url == n.item) poll.state.seen.erase(poll.ids[i]);
  }
  add_skipped(report, poll.skipped);
  report.fetched += poll.already_seen;
  report.duplicate += poll.already_seen;
  save_feed_state(poll.state, state_path);
  return report;
}

IngestReport run_source(const SourceDescriptor& source, Fetcher& fetcher, Store& store,
                        const std::filesystem::path& state_dir, const IngestOptions& options) {
  switch (source.channel) {
    case Channel::kListingScrape:
      return run_listing(source, fetcher, store, options);
    case Channel::kRss:
      return run_feed(source, fetcher, store, state_dir / ("feed-" + source.dataset + ".json"), options);
    case Channel::kLawRepoSync:
      return sync_law_repo(source, store, options);
    case Channel::kFileDrop:
      return import_file_drop(source.drop_path, source, store, state_dir / ("filedrop-" + source.dataset + ".json"),
                              options);
  }
  throw ConfigError("unknown channel for " + source.dataset);
}

}  // namespace openlex::ingest
