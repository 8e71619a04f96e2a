#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "openlex/ingest/ingest.hpp"
#include "openlex/markup/dom.hpp"
#include "openlex/markup/selector.hpp"
#include "openlex/model/validate.hpp"

namespace openlex::ingest {

namespace {

enum class Outcome { kNew, kUpdated, kDuplicate, kSkipped, kFailed };

struct Built {
  std::optional<DocumentRecord> record;
  Language language = Language::kEn;
  std::optional<Note> note;
  Outcome outcome = Outcome::kFailed;
};

Timestamp system_now() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

bool looks_like_html(std::string_view body) {
  auto start = body.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  if (start == std::string_view::npos) return false;
  std::string head(body.substr(start, 15));
  std::transform(head.begin(), head.end(), head.begin(), [](unsigned char c) { return std::tolower(c); });
  return head.rfind("<!doctype html", 0) == 0 || head.rfind("<html", 0) == 0;
}

std::string plain(std::string_view body) {
  if (body.rfind("\xEF\xBB\xBF", 0) == 0) body.remove_prefix(3);
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\r') {
      out += '\n';
      if (i + 1 < body.size() && body[i + 1] == '\n') ++i;
    } else {
      out += body[i];
    }
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
  return out;
}

// Sets the language-specific fields of `into` from the single-language `from`.
void overlay(DocumentRecord& into, const DocumentRecord& from, Language l) {
  if (from.citation(l)) into.citation(l) = from.citation(l);
  if (from.name(l)) into.name(l) = from.name(l);
  if (from.document_date(l)) into.document_date(l) = from.document_date(l);
  into.url(l) = from.url(l);
  into.scraped_timestamp(l) = from.scraped_timestamp(l);
  into.text(l) = from.text(l);
  if (from.kind == DocumentKind::kLaw) into.sections(l) = from.sections(l);
  into.upstream_license = from.upstream_license;
}

Built build(const DocumentStub& stub, Fetcher& fetcher, const SourceDescriptor& source, Timestamp now) {
  Built b;
  const std::string item = stub.citation.empty() ? stub.url : stub.citation;
  if (stub.dataset != source.dataset) {
    b.outcome = Outcome::kSkipped;
    b.note = Note{item, "dataset_mismatch", "stub dataset " + stub.dataset + " does not match source " + source.dataset};
    return b;
  }
  FetchResult fetched;
  try {
    fetched = fetcher.fetch(stub.url);
  } catch (const std::exception& e) {
    b.note = Note{item, "fetch_failed", e.what()};
    return b;
  }
  const std::string url = stub.identifier.empty() ? stub.url : stub.identifier;
  DocumentRecord r;
  Language l = stub.language;
  try {
    if (source.kind == DocumentKind::kLaw) {
      auto parsed = parse_law_xml(fetched.body, source, url, now);
      r = std::move(parsed.record);
      for (Language x : kLanguages)
        if (r.text(x)) l = x;
      if (!r.citation(l) && !stub.citation.empty()) r.citation(l) = stub.citation;
      if (!stub.name.empty() && !r.name(l)) r.name(l) = stub.name;
    } else {
      r.dataset = source.dataset;
      r.kind = source.kind;
      r.citation(l) = stub.citation;
      if (!stub.name.empty()) r.name(l) = stub.name;
      r.document_date(l) = stub.date;
      r.url(l) = url;
      r.scraped_timestamp(l) = now;
      r.text(l) = extract_text(fetched, source);
      r.upstream_license = source.license_text;
    }
  } catch (const std::exception& e) {
    b.note = Note{item, "unreadable", e.what()};
    return b;
  }
  if (r.citation(l) && r.citation(l)->empty()) r.citation(l).reset();
  b.record = std::move(r);
  b.language = l;
  b.outcome = Outcome::kNew;
  return b;
}

struct Pending {
  DocumentRecord record;
  std::vector<std::size_t> stubs;  // contributing stub indices
};

std::vector<Outcome> run_batch(const std::vector<DocumentStub>& stubs, Fetcher& fetcher,
                               const SourceDescriptor& source, Store& store, const IngestOptions& options,
                               IngestReport& report) {
  const Timestamp now = options.clock ? options.clock() : system_now();
  const std::size_t n = stubs.size();
  std::vector<Built> built(n);

  // Group by host; hosts run concurrently, each host in stub order.
  std::map<std::string, std::vector<std::size_t>> by_host;
  for (std::size_t i = 0; i < n; ++i) by_host[url_host(stubs[i].url)].push_back(i);
  std::vector<const std::vector<std::size_t>*> groups;
  for (auto& [h, idx] : by_host) groups.push_back(&idx);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t g; (g = next++) < groups.size();)
      for (std::size_t i : *groups[g]) built[i] = build(stubs[i], fetcher, source, now);
  };
  std::size_t threads = std::min(groups.size(), std::max<std::size_t>(1, options.max_parallel_hosts));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  auto snap = store.snapshot();
  std::vector<Pending> pending;
  std::vector<Outcome> outcome(n, Outcome::kFailed);
  std::vector<std::optional<Note>> notes(n);

  auto pending_index = [&](const DocumentRecord& r) -> std::optional<std::size_t> {
    for (std::size_t p = 0; p < pending.size(); ++p) {
      if (pending[p].record.dataset != r.dataset) continue;
      for (Language a : kLanguages)
        for (Language b : kLanguages)
          if (r.citation(a) && pending[p].record.citation(b) &&
              normalize_citation(*r.citation(a)) == normalize_citation(*pending[p].record.citation(b)))
            return p;
    }
    return std::nullopt;
  };

  for (std::size_t i = 0; i < n; ++i) {
    Built& b = built[i];
    outcome[i] = b.outcome;
    notes[i] = b.note;
    if (!b.record) continue;
    const DocumentRecord& r = *b.record;
    const Language l = b.language;
    const std::string item = r.citation(l).value_or(stubs[i].url);

    if (auto v = validate_record(r); !v.ok()) {
      outcome[i] = Outcome::kSkipped;
      notes[i] = Note{item, "invalid", v.summary()};
      continue;
    }
    const DocumentRecord* existing = nullptr;
    auto p = pending_index(r);
    if (p) {
      existing = &pending[*p].record;
    } else {
      for (Language x : kLanguages)
        if (!existing && r.citation(x)) existing = snap->find(r.dataset, *r.citation(x));
    }
    if (!existing) {
      pending.push_back({r, {i}});
      outcome[i] = Outcome::kNew;
      continue;
    }
    const auto& old_text = existing->text(l);
    if (old_text && content_digest(*old_text) == content_digest(*r.text(l))) {
      outcome[i] = Outcome::kDuplicate;
      continue;
    }
    DocumentRecord merged = *existing;
    overlay(merged, r, l);
    if (auto v = validate_record(merged); !v.ok()) {
      outcome[i] = Outcome::kSkipped;
      notes[i] = Note{item, "invalid", v.summary()};
      continue;
    }
    if (p) {
      pending[*p].record = std::move(merged);
      pending[*p].stubs.push_back(i);
    } else {
      pending.push_back({std::move(merged), {i}});
    }
    outcome[i] = Outcome::kUpdated;
  }

  // A batch the store rejects as a whole is retried without the rejected rows.
  for (;;) {
    std::vector<DocumentRecord> batch;
    for (auto& pd : pending) batch.push_back(pd.record);
    UpsertReport up = store.upsert(batch);
    report.snapshot_version = up.version;
    if (up.accepted()) break;
    std::vector<bool> drop(pending.size(), false);
    for (auto& rej : up.rejected) {
      drop[rej.index] = true;
      std::string why;
      for (auto& v : rej.violations) why += (why.empty() ? "" : "; ") + v.message;
      for (std::size_t i : pending[rej.index].stubs) {
        outcome[i] = Outcome::kSkipped;
        notes[i] = Note{rej.key, "rejected", why};
      }
    }
    std::vector<Pending> keep;
    for (std::size_t k = 0; k < pending.size(); ++k)
      if (!drop[k]) keep.push_back(std::move(pending[k]));
    pending = std::move(keep);
  }

  report.fetched += n;
  for (std::size_t i = 0; i < n; ++i) {
    switch (outcome[i]) {
      case Outcome::kNew: ++report.new_records; break;
      case Outcome::kUpdated: ++report.updated; break;
      case Outcome::kDuplicate: ++report.duplicate; break;
      case Outcome::kSkipped: ++report.skipped; break;
      case Outcome::kFailed: ++report.failed; break;
    }
    if (notes[i]) report.notes.push_back(*notes[i]);
  }
  return outcome;
}

std::map<std::string, std::string> parse_sidecar(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    auto sep = line.find_first_of(":=", start);
    if (sep == std::string::npos) continue;
    std::string key = line.substr(start, sep - start);
    std::string value = line.substr(sep + 1);
    auto trim = [](std::string& s) {
      s.erase(0, std::min(s.size(), s.find_first_not_of(" \t")));
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    };
    trim(key);
    trim(value);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    out[key] = value;
  }
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FetchError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string content_digest(std::string_view text) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr)) throw Error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

IngestReport& IngestReport::operator+=(const IngestReport& o) {
  fetched += o.fetched;
  new_records += o.new_records;
  updated += o.updated;
  duplicate += o.duplicate;
  skipped += o.skipped;
  failed += o.failed;
  notes.insert(notes.end(), o.notes.begin(), o.notes.end());
  snapshot_version = std::max(snapshot_version, o.snapshot_version);
  return *this;
}

std::string extract_text(const FetchResult& fetched, const SourceDescriptor& source) {
  const std::string& type = fetched.content_type;
  if (type == "application/pdf") throw FetchError("PDF documents are not supported");
  if (type == "text/html" || type == "application/xhtml+xml" || (type.empty() && looks_like_html(fetched.body))) {
    auto doc = markup::parse(fetched.body, markup::Mode::kHtml);
    const markup::Node* node = nullptr;
    if (!source.selectors.content.empty()) {
      node = markup::select_first(doc.root, source.selectors.content);
      if (!node) throw ParseError("content selector \"" + source.selectors.content + "\" matched nothing", 0);
    } else {
      node = markup::select_first(doc.root, "body");
      if (!node) node = &doc.root;
    }
    return markup::block_text(*node);
  }
  if (type == "application/xml" || type == "text/xml") {
    auto doc = markup::parse(fetched.body, markup::Mode::kXml);
    return markup::block_text(doc.root);
  }
  if (type.empty() || type == "text/plain") return plain(fetched.body);
  throw FetchError("unsupported media type " + type);
}

IngestReport ingest_batch(const std::vector<DocumentStub>& stubs, Fetcher& fetcher, const SourceDescriptor& source,
                          Store& store, const IngestOptions& options) {
  IngestReport report;
  run_batch(stubs, fetcher, source, store, options, report);
  return report;
}

IngestReport import_file_drop(const std::filesystem::path& dir, const SourceDescriptor& source, Store& store,
                              const std::optional<std::filesystem::path>& state_path, const IngestOptions& options) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());

  std::map<std::string, std::string> processed;
  if (state_path && fs::exists(*state_path)) {
    try {
      auto j = nlohmann::json::parse(read_file(*state_path));
      for (auto& [k, v] : j.at("files").items()) processed[k] = v.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("bad file-drop state " + state_path->string() + ": " + e.what());
    }
  }

  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(dir)) {
    auto name = e.path().filename().string();
    if (!e.is_regular_file() || name.empty() || name[0] == '.') continue;
    if (e.path().extension() == ".meta") continue;
    files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  IngestReport report;
  std::vector<DocumentStub> stubs;
  std::vector<std::pair<std::string, std::string>> stub_files;  // name, digest
  for (auto& f : files) {
    const std::string name = f.filename().string();
    fs::path meta = f;
    meta += ".meta";
    if (!fs::exists(meta)) meta = f.parent_path() / (f.stem().string() + ".meta");
    if (!fs::exists(meta)) {
      ++report.fetched;
      ++report.skipped;
      report.notes.push_back({name, "missing_sidecar", "no " + name + ".meta sidecar"});
      continue;
    }
    std::string meta_text, body;
    try {
      meta_text = read_file(meta);
      body = read_file(f);
    } catch (const FetchError& e) {
      ++report.fetched;
      ++report.failed;
      report.notes.push_back({name, "unreadable", e.what()});
      continue;
    }
    std::string digest = content_digest(content_digest(meta_text) + content_digest(body));
    if (auto it = processed.find(name); it != processed.end() && it->second == digest) {
      ++report.fetched;
      ++report.duplicate;
      continue;
    }
    auto kv = parse_sidecar(meta_text);
    auto skip = [&](std::string code, std::string msg) {
      ++report.fetched;
      ++report.skipped;
      report.notes.push_back({name, std::move(code), std::move(msg)});
    };
    DocumentStub stub;
    stub.dataset = kv.count("dataset") ? kv["dataset"] : source.dataset;
    stub.citation = kv["citation"];
    stub.name = kv["name"];
    stub.url = f.string();
    stub.identifier = "file-drop:" + stub.dataset + "/" + name;
    if (stub.citation.empty()) {
      skip("missing_citation", "sidecar has no citation");
      continue;
    }
    auto lang = parse_language(kv.count("language") ? kv["language"] : std::string(to_string(source.language)));
    if (!lang) {
      skip("bad_language", "sidecar language must be en or fr");
      continue;
    }
    stub.language = *lang;
    if (!kv["date"].empty()) {
      stub.date = parse_date(kv["date"], source.selectors.date_format);
      if (!stub.date) {
        skip("bad_date", "sidecar date \"" + kv["date"] + "\" does not parse");
        continue;
      }
    }
    stubs.push_back(std::move(stub));
    stub_files.emplace_back(name, digest);
  }

  FileFetcher files_fetcher;
  auto outcomes = run_batch(stubs, files_fetcher, source, store, options, report);
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (outcomes[i] == Outcome::kNew || outcomes[i] == Outcome::kUpdated || outcomes[i] == Outcome::kDuplicate)
      processed[stub_files[i].first] = stub_files[i].second;

  if (state_path) {
    nlohmann::ordered_json j;
    j["files"] = nlohmann::ordered_json::object();
    for (auto& [k, v] : processed) j["files"][k] = v;
    if (state_path->has_parent_path()) fs::create_directories(state_path->parent_path());
    auto tmp = *state_path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << j.dump(2) << "\n";
      if (!out) throw IoError("cannot write " + tmp.string());
    }
    fs::rename(tmp, *state_path);
  }
  if (report.snapshot_version == 0) report.snapshot_version = store.snapshot()->version();
  return report;
}

IngestReport sync_law_repo(const SourceDescriptor& source, Store& store, const IngestOptions& options) {
  namespace fs = std::filesystem;
  fs::path root = source.repo_path;
  if (!fs::is_directory(root)) throw IoError("law repository not found: " + root.string());
  std::vector<fs::path> files;
  for (auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".xml") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<DocumentStub> stubs;
  for (auto& f : files) {
    DocumentStub s;
    s.dataset = source.dataset;
    s.url = f.string();
    s.identifier = fs::relative(f, root).generic_string();
    s.language = source.language;
    stubs.push_back(std::move(s));
  }
  FileFetcher fetcher;
  return ingest_batch(stubs, fetcher, source, store, options);
}

}  // namespace openlex::ingest
