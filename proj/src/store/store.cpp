#include "openlex/store/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "openlex/error.hpp"
#include "openlex/model/record_json.hpp"

namespace openlex {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCorpusFile = "corpus.jsonl";
constexpr const char* kWalFile = "wal.jsonl";
constexpr const char* kLockFile = ".writer.lock";

std::vector<std::string> citations_of(const DocumentRecord& r) {
  std::vector<std::string> out;
  for (Language l : kLanguages) {
    if (!r.citation(l)) continue;
    std::string c = normalize_citation(*r.citation(l));
    if (!c.empty() && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  return out;
}

std::string dump_line(const ordered_json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

class DirLock {
 public:
  explicit DirLock(const fs::path& dir) {
    fd_ = ::open((dir / kLockFile).c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open writer lock in " + dir.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw IoError("cannot take writer lock in " + dir.string());
    }
  }
  ~DirLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

// Cases never carry a sections list, not even an empty one.
DocumentRecord canonical(const DocumentRecord& r) {
  DocumentRecord c = r;
  if (c.kind == DocumentKind::kCase) {
    if (c.unofficial_sections_en && c.unofficial_sections_en->empty()) c.unofficial_sections_en.reset();
    if (c.unofficial_sections_fr && c.unofficial_sections_fr->empty()) c.unofficial_sections_fr.reset();
  }
  return c;
}

}  // namespace

CorpusSnapshot::CorpusSnapshot(std::vector<RecordPtr> records, std::uint64_t version)
    : records_(std::move(records)), version_(version) {
  std::vector<RecordKey> keys;
  keys.reserve(records_.size());
  std::vector<std::size_t> order(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    keys.push_back(record_key(*records_[i]));
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<RecordPtr> sorted;
  sorted.reserve(records_.size());
  for (std::size_t i : order) sorted.push_back(std::move(records_[i]));
  records_ = std::move(sorted);

  for (std::size_t i = 0; i < records_.size(); ++i) {
    for (auto& c : citations_of(*records_[i])) {
      auto [it, inserted] = by_citation_.emplace(std::make_pair(records_[i]->dataset, c), i);
      if (!inserted) throw Error("duplicate record key " + records_[i]->dataset + "/" + c);
    }
  }
}

std::shared_ptr<const CorpusSnapshot> CorpusSnapshot::make(std::vector<DocumentRecord> records,
                                                           std::uint64_t version) {
  std::vector<RecordPtr> ptrs;
  ptrs.reserve(records.size());
  for (auto& r : records) ptrs.push_back(std::make_shared<const DocumentRecord>(std::move(r)));
  return std::make_shared<const CorpusSnapshot>(std::move(ptrs), version);
}

std::optional<std::size_t> CorpusSnapshot::index_of(std::string_view dataset,
                                                    std::string_view citation) const {
  auto it = by_citation_.find(std::make_pair(std::string(dataset), normalize_citation(citation)));
  if (it == by_citation_.end()) return std::nullopt;
  return it->second;
}

const DocumentRecord* CorpusSnapshot::find(std::string_view dataset, std::string_view citation) const {
  auto i = index_of(dataset, citation);
  return i ? records_[*i].get() : nullptr;
}

bool CorpusSnapshot::has_dataset(std::string_view dataset) const {
  auto it = by_citation_.lower_bound(std::make_pair(std::string(dataset), std::string()));
  return it != by_citation_.end() && it->first.first == dataset;
}

std::vector<std::string> CorpusSnapshot::datasets() const {
  std::vector<std::string> out;
  for (auto& r : records_)
    if (out.empty() || out.back() != r->dataset) out.push_back(r->dataset);
  return out;
}

bool CorpusSnapshot::operator==(const CorpusSnapshot& o) const {
  if (version_ != o.version_ || records_.size() != o.records_.size()) return false;
  for (std::size_t i = 0; i < records_.size(); ++i)
    if (!(*records_[i] == *o.records_[i])) return false;
  return true;
}

bool ScanFilter::matches(const DocumentRecord& r) const {
  if (dataset && r.dataset != *dataset) return false;
  if (kind && r.kind != *kind) return false;
  if (from || to) {
    auto d = primary_date(r);
    if (!d) return false;
    if (from && *d < *from) return false;
    if (to && *d > *to) return false;
  }
  return true;
}

std::vector<const DocumentRecord*> scan_refs(const CorpusSnapshot& snap, const ScanFilter& filter) {
  std::vector<const DocumentRecord*> out;
  for (auto& r : snap.records())
    if (filter.matches(*r)) out.push_back(r.get());
  std::stable_sort(out.begin(), out.end(),
                   [](const DocumentRecord* a, const DocumentRecord* b) { return scan_order_less(*a, *b); });
  return out;
}

std::vector<DocumentRecord> scan(const CorpusSnapshot& snap, const ScanFilter& filter) {
  std::vector<DocumentRecord> out;
  for (auto* r : scan_refs(snap, filter)) out.push_back(*r);
  return out;
}

SnapshotPtr load_store_snapshot(const fs::path& dir) {
  fs::path file = dir / kCorpusFile;
  if (!fs::exists(file)) return std::make_shared<const CorpusSnapshot>();
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::string line;
  std::uint64_t version = 0;
  std::vector<DocumentRecord> records;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(file.string() + " line " + std::to_string(line_no) + ": " + e.what(), e.byte);
    }
    if (line_no == 1 && j.contains("snapshot_version")) {
      version = j["snapshot_version"].get<std::uint64_t>();
      continue;
    }
    records.push_back(record_from_json(j));
  }
  return CorpusSnapshot::make(std::move(records), version);
}

Store::Store() : current_(std::make_shared<const CorpusSnapshot>()) {}

Store::Store(const fs::path& dir) : dir_(dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create store directory " + dir.string() + ": " + ec.message());
  current_ = load_store_snapshot(dir);
}

SnapshotPtr Store::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

UpsertReport Store::upsert(std::span<const DocumentRecord> records) {
  std::lock_guard writer(writer_mutex_);
  std::optional<DirLock> dir_lock;
  if (dir_) {
    dir_lock.emplace(*dir_);
    // Another process may have committed since this store was opened.
    auto on_disk = load_store_snapshot(*dir_);
    if (on_disk->version() != snapshot()->version()) {
      std::lock_guard lock(snapshot_mutex_);
      current_ = on_disk;
    }
  }
  SnapshotPtr base = snapshot();
  UpsertReport report;
  report.version = base->version();

  std::map<RecordKey, RecordPtr> by_key;
  std::map<std::pair<std::string, std::string>, RecordKey> alias;
  for (auto& r : base->records()) {
    RecordKey k = record_key(*r);
    for (auto& c : citations_of(*r)) alias.emplace(std::make_pair(r->dataset, c), k);
    by_key.emplace(std::move(k), r);
  }

  std::vector<WalEntry> replaced;
  std::size_t inserted = 0, updated = 0, unchanged = 0;
  const std::uint64_t next_version = base->version() + 1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    DocumentRecord rec = canonical(records[i]);
    auto check = validate_record(rec);
    if (!check.ok()) {
      report.rejected.push_back({i, record_key(rec).str(), std::move(check.violations)});
      continue;
    }
    std::set<RecordKey> matched;
    for (auto& c : citations_of(rec)) {
      auto it = alias.find(std::make_pair(rec.dataset, c));
      if (it != alias.end()) matched.insert(it->second);
    }
    if (matched.size() > 1) {
      report.rejected.push_back(
          {i, record_key(rec).str(),
           {{"citation_conflict", "citations match more than one stored record"}}});
      continue;
    }
    auto fresh = std::make_shared<const DocumentRecord>(std::move(rec));
    auto add = [&](const RecordPtr& r) {
      RecordKey k = record_key(*r);
      for (auto& c : citations_of(*r)) alias[std::make_pair(r->dataset, c)] = k;
      by_key[k] = r;
    };
    if (matched.empty()) {
      add(fresh);
      ++inserted;
      continue;
    }
    const RecordKey old_key = *matched.begin();
    RecordPtr old = by_key.at(old_key);
    if (*old == *fresh) {
      ++unchanged;
      continue;
    }
    for (auto& c : citations_of(*old)) alias.erase(std::make_pair(old->dataset, c));
    by_key.erase(old_key);
    add(fresh);
    replaced.push_back({next_version, old_key.str(), *old});
    ++updated;
  }

  if (!report.rejected.empty()) return report;
  report.inserted = inserted;
  report.updated = updated;
  report.unchanged = unchanged;
  if (inserted + updated == 0) return report;

  std::vector<RecordPtr> next_records;
  next_records.reserve(by_key.size());
  for (auto& [k, r] : by_key) next_records.push_back(r);
  auto next = std::make_shared<const CorpusSnapshot>(std::move(next_records), next_version);
  persist(*next, replaced);
  {
    std::lock_guard lock(snapshot_mutex_);
    current_ = next;
  }
  report.version = next_version;
  return report;
}

void Store::persist(const CorpusSnapshot& next, const std::vector<WalEntry>& replaced) {
  if (!dir_) {
    memory_wal_.insert(memory_wal_.end(), replaced.begin(), replaced.end());
    return;
  }
  if (!replaced.empty()) {
    std::ofstream wal(*dir_ / kWalFile, std::ios::binary | std::ios::app);
    for (auto& e : replaced) {
      ordered_json j;
      j["version"] = e.version;
      j["key"] = e.key;
      j["previous"] = record_to_stored_json(e.previous);
      wal << dump_line(j) << '\n';
    }
    wal.flush();
    if (!wal) throw IoError("cannot append to " + (*dir_ / kWalFile).string());
  }
  fs::path tmp = *dir_ / (std::string(kCorpusFile) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    ordered_json header;
    header["snapshot_version"] = next.version();
    out << dump_line(header) << '\n';
    for (auto& r : next.records()) out << dump_line(record_to_stored_json(*r)) << '\n';
    out.flush();
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, *dir_ / kCorpusFile, ec);
  if (ec) throw IoError("cannot replace corpus file: " + ec.message());
}

std::vector<WalEntry> Store::write_log() const {
  if (!dir_) {
    std::lock_guard writer(writer_mutex_);
    return memory_wal_;
  }
  std::vector<WalEntry> out;
  std::ifstream in(*dir_ / kWalFile, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    out.push_back({j.at("version").get<std::uint64_t>(), j.at("key").get<std::string>(),
                   record_from_json(j.at("previous"))});
  }
  return out;
}

}  // namespace openlex
