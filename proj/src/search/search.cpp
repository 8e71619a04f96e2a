#include "openlex/search/search.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "openlex/error.hpp"
#include "openlex/kernels/kernels.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex {

namespace {

constexpr std::size_t kLeadCodepoints = 80;

std::vector<std::string> citation_fields(const DocumentRecord& r) {
  std::vector<std::string> out;
  for (Language l : kLanguages) {
    for (auto* f : {&r.citation(l), &r.citation2(l)}) {
      if (!*f) continue;
      auto c = normalize_citation(**f);
      if (!c.empty() && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
  }
  return out;
}

// Byte offset `n` code points before `pos`.
std::size_t back_codepoints(std::string_view s, std::size_t pos, std::size_t n) {
  while (pos > 0 && n > 0) {
    pos = text::floor_boundary(s, pos - 1);
    --n;
  }
  return pos;
}

}  // namespace

bool QuerySpec::has_criterion() const {
  return citation || name || text || date_from || date_to || !datasets.empty();
}

std::vector<std::string> query_terms(std::string_view text) {
  std::vector<std::string> out;
  text::for_each_term(text, [&](std::string_view t, std::size_t, std::size_t) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.emplace_back(t);
  });
  return out;
}

void validate_query(const QuerySpec& q) {
  if (!q.has_criterion())
    throw InvalidQuery("at least one of citation, name, text, date range or dataset is required");
  if (q.page < 1) throw InvalidQuery("page must be >= 1");
  if (q.page_size < 1 || q.page_size > kMaxPageSize)
    throw InvalidQuery("page_size must be between 1 and " + std::to_string(kMaxPageSize));
  if (q.date_from && q.date_to && *q.date_from > *q.date_to)
    throw InvalidQuery("date_from is after date_to");
  if (q.text && query_terms(*q.text).empty()) throw InvalidQuery("text query has no searchable terms");
  if (q.citation && normalize_citation(*q.citation).empty()) throw InvalidQuery("citation is empty");
}

std::shared_ptr<const Index> Index::build(SnapshotPtr snapshot) {
  auto idx = std::shared_ptr<Index>(new Index());
  idx->snap_ = snapshot ? std::move(snapshot) : std::make_shared<const CorpusSnapshot>();
  const auto& recs = idx->snap_->records();

  std::vector<std::string_view> texts;
  std::vector<std::uint32_t> owner;
  for (std::uint32_t i = 0; i < recs.size(); ++i) {
    for (Language l : kLanguages) {
      if (!recs[i]->text(l)) continue;
      texts.push_back(*recs[i]->text(l));
      owner.push_back(i);
    }
  }
  auto terms = kernels::parallel::extract_terms_batch(texts);

  idx->doc_length_.assign(recs.size(), 0);
  // Documents are visited in index order, so postings come out sorted.
  std::vector<std::map<std::string, std::uint32_t>> merged(recs.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    idx->doc_length_[owner[t]] += terms[t].length;
    for (auto& [term, n] : terms[t].counts) merged[owner[t]][term] += n;
  }
  for (std::uint32_t i = 0; i < recs.size(); ++i) {
    for (auto& [term, n] : merged[i]) idx->postings_[term].push_back({i, n});
    const DocumentRecord& r = *recs[i];
    idx->folded_names_.push_back({text::fold(r.name_en.value_or("")), text::fold(r.name_fr.value_or(""))});
    for (auto& c : citation_fields(r)) idx->by_citation_[c].push_back(i);
  }
  return idx;
}

std::vector<std::size_t> Index::ranked_matches(const QuerySpec& q) const {
  validate_query(q);
  const auto& recs = snap_->records();
  const std::size_t n = recs.size();

  std::vector<double> score(n, 0.0);
  std::vector<char> candidate(n, 1);

  if (q.text) {
    auto terms = query_terms(*q.text);
    std::vector<std::uint32_t> hits(n, 0);
    for (auto& t : terms) {
      auto it = postings_.find(t);
      if (it == postings_.end()) return {};
      for (auto& p : it->second) {
        ++hits[p.doc];
        if (doc_length_[p.doc] > 0) score[p.doc] += static_cast<double>(p.tf) / doc_length_[p.doc];
      }
    }
    for (std::size_t i = 0; i < n; ++i) candidate[i] = hits[i] == terms.size();
  }
  if (q.citation) {
    std::vector<char> keep(n, 0);
    auto it = by_citation_.find(normalize_citation(*q.citation));
    if (it != by_citation_.end())
      for (auto d : it->second) keep[d] = 1;
    for (std::size_t i = 0; i < n; ++i) candidate[i] = candidate[i] && keep[i];
  }
  std::string name_needle = q.name ? text::fold(*q.name) : std::string();

  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!candidate[i]) continue;
    const DocumentRecord& r = *recs[i];
    if (q.kind && r.kind != *q.kind) continue;
    if (!q.datasets.empty() && std::find(q.datasets.begin(), q.datasets.end(), r.dataset) == q.datasets.end())
      continue;
    if (q.date_from || q.date_to) {
      auto d = primary_date(r);
      if (!d || (q.date_from && *d < *q.date_from) || (q.date_to && *d > *q.date_to)) continue;
    }
    if (q.name && folded_names_[i].first.find(name_needle) == std::string::npos &&
        folded_names_[i].second.find(name_needle) == std::string::npos)
      continue;
    out.push_back(i);
  }

  std::vector<std::string> cits(n);
  for (auto i : out) cits[i] = primary_citation(*recs[i]);
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    auto da = primary_date(*recs[a]), db = primary_date(*recs[b]);
    if (da != db) {
      if (!da) return false;
      if (!db) return true;
      return *da > *db;
    }
    if (cits[a] != cits[b]) return cits[a] < cits[b];
    return recs[a]->dataset < recs[b]->dataset;
  });
  return out;
}

std::string Index::snippet_for(const DocumentRecord& r, const std::vector<std::string>& terms) const {
  std::unordered_set<std::string> wanted(terms.begin(), terms.end());
  for (Language l : kLanguages) {
    if (!r.has_text(l) || wanted.empty()) continue;
    std::string_view t = *r.text(l);
    std::optional<std::size_t> at;
    text::for_each_term(t, [&](std::string_view term, std::size_t off, std::size_t) {
      if (!at && wanted.count(std::string(term))) at = off;
    });
    if (!at) continue;
    std::size_t start = back_codepoints(t, *at, kLeadCodepoints);
    if (start > 0) {
      // Start on a word boundary when one lies before the match.
      std::size_t sp = t.find_first_of(" \t\n\r", start);
      if (sp != std::string_view::npos && sp < *at) start = sp + 1;
    }
    std::string_view rest = t.substr(start);
    return std::string(rest.substr(0, text::prefix_bytes(rest, kSnippetCodepoints)));
  }
  for (Language l : kLanguages) {
    if (!r.has_text(l)) continue;
    std::string_view t = *r.text(l);
    return std::string(t.substr(0, text::prefix_bytes(t, kSnippetCodepoints)));
  }
  return {};
}

SearchPage Index::search(const QuerySpec& q) const {
  auto order = ranked_matches(q);
  SearchPage page;
  page.total = order.size();
  page.page = q.page;
  page.page_size = q.page_size;
  const std::size_t begin = static_cast<std::size_t>(q.page - 1) * static_cast<std::size_t>(q.page_size);
  if (begin >= order.size()) return page;
  const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(q.page_size));

  auto terms = q.text ? query_terms(*q.text) : std::vector<std::string>{};
  for (std::size_t k = begin; k < end; ++k) {
    const DocumentRecord& r = *snap_->records()[order[k]];
    SearchHit h;
    h.key = record_key(r);
    h.kind = r.kind;
    h.name = primary_name(r);
    h.date = primary_date(r);
    h.snippet = snippet_for(r, terms);
    if (!terms.empty()) {
      std::uint32_t len = doc_length_[order[k]];
      for (auto& t : terms) {
        auto it = postings_.find(t);
        auto p = std::lower_bound(it->second.begin(), it->second.end(), static_cast<std::uint32_t>(order[k]),
                                  [](const Posting& a, std::uint32_t d) { return a.doc < d; });
        if (len > 0) h.score += static_cast<double>(p->tf) / len;
      }
    }
    page.hits.push_back(std::move(h));
  }
  return page;
}

SearchPage search(const Index& index, const QuerySpec& q) { return index.search(q); }

IndexPtr LiveIndex::current() const {
  auto snap = store_.snapshot();
  {
    std::lock_guard lock(mutex_);
    if (index_ && index_->snapshot_version() == snap->version()) return index_;
  }
  auto fresh = Index::build(snap);
  std::lock_guard lock(mutex_);
  if (!index_ || index_->snapshot_version() < fresh->snapshot_version()) index_ = fresh;
  return index_;
}

DirectoryIndex::DirectoryIndex(std::filesystem::path dir) : dir_(std::move(dir)) {}

IndexPtr DirectoryIndex::current() const {
  std::error_code ec;
  auto file = dir_ / "corpus.jsonl";
  auto mtime = std::filesystem::last_write_time(file, ec);
  if (ec) mtime = {};
  auto size = std::filesystem::file_size(file, ec);
  if (ec) size = 0;
  std::lock_guard lock(mutex_);
  if (index_ && mtime == mtime_ && size == size_) return index_;
  auto snap = load_store_snapshot(dir_);
  if (!index_ || index_->snapshot_version() != snap->version()) index_ = Index::build(snap);
  mtime_ = mtime;
  size_ = size;
  return index_;
}

}  // namespace openlex
