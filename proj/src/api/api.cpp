#include "openlex/api/api.hpp"

#include <charconv>

#include "openlex/error.hpp"
#include "openlex/model/record_json.hpp"

namespace openlex::api {

namespace {

Response json_response(int status, const ordered_json& body, std::uint64_t version) {
  Response r;
  r.status = status;
  r.body = body.dump();
  r.snapshot_version = version;
  return r;
}

Response error_response(const ApiError& e, std::uint64_t version) { return json_response(e.status, to_json(e), version); }

std::optional<std::string> single(const Params& params, const std::string& key) {
  auto [lo, hi] = params.equal_range(key);
  if (lo == hi) return std::nullopt;
  if (std::next(lo) != hi) throw InvalidQuery("parameter " + key + " given more than once");
  return lo->second;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InvalidQuery(key + " must be an integer");
  return out;
}

Date to_date(const std::string& key, const std::string& v) {
  auto d = Date::from_iso(v);
  if (!d) throw InvalidQuery(key + " must be a date in YYYY-MM-DD form");
  return *d;
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i <= path.size()) {
    auto j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.push_back(path.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::optional<DocumentKind> collection(std::string_view seg) {
  if (seg == "cases") return DocumentKind::kCase;
  if (seg == "laws") return DocumentKind::kLaw;
  return std::nullopt;
}

int hexval(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

ordered_json to_json(const SearchHit& h) {
  ordered_json j;
  j["dataset"] = h.key.dataset;
  j["citation"] = h.key.citation;
  j["kind"] = to_string(h.kind);
  j["name"] = h.name;
  j["document_date"] = h.date ? ordered_json(h.date->iso()) : ordered_json(nullptr);
  j["snippet"] = h.snippet;
  j["score"] = h.score;
  return j;
}

ordered_json to_json(const SearchPage& p) {
  ordered_json j;
  j["total"] = p.total;
  j["page"] = p.page;
  j["page_size"] = p.page_size;
  j["hits"] = ordered_json::array();
  for (auto& h : p.hits) j["hits"].push_back(to_json(h));
  return j;
}

ordered_json to_json(const CoverageTable& t) {
  ordered_json j;
  j["tokenizer"] = t.tokenizer;
  j["rows"] = ordered_json::array();
  for (auto& r : t.rows) {
    ordered_json row;
    row["dataset"] = r.dataset;
    row["earliest"] = r.earliest ? ordered_json(r.earliest->iso()) : ordered_json(nullptr);
    row["latest"] = r.latest ? ordered_json(r.latest->iso()) : ordered_json(nullptr);
    row["documents"] = r.documents;
    row["tokens"] = r.tokens;
    j["rows"].push_back(std::move(row));
  }
  j["total_documents"] = t.total_documents;
  j["total_tokens"] = t.total_tokens;
  return j;
}

ordered_json to_json(const ApiError& e) {
  ordered_json j;
  j["error"] = {{"status", e.status}, {"code", e.code}, {"message", e.message}};
  return j;
}

std::string url_decode(std::string_view s, bool plus_is_space) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '%' && i + 2 < s.size()) {
      int hi = hexval(s[i + 1]), lo = hexval(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(plus_is_space && c == '+' ? ' ' : c);
  }
  return out;
}

Params parse_query_string(std::string_view qs) {
  Params out;
  while (!qs.empty()) {
    auto amp = qs.find('&');
    auto part = qs.substr(0, amp);
    qs = amp == std::string_view::npos ? std::string_view() : qs.substr(amp + 1);
    if (part.empty()) continue;
    auto eq = part.find('=');
    std::string key = url_decode(part.substr(0, eq), true);
    std::string value = eq == std::string_view::npos ? std::string() : url_decode(part.substr(eq + 1), true);
    out.emplace(std::move(key), std::move(value));
  }
  return out;
}

QuerySpec query_from_params(const Params& params, DocumentKind kind) {
  static const char* known[] = {"citation", "name", "text", "date_from", "date_to", "dataset", "page", "page_size"};
  for (auto& [k, v] : params)
    if (std::find(std::begin(known), std::end(known), k) == std::end(known))
      throw InvalidQuery("unknown parameter " + k);
  QuerySpec q;
  q.kind = kind;
  q.citation = single(params, "citation");
  q.name = single(params, "name");
  q.text = single(params, "text");
  if (auto v = single(params, "date_from")) q.date_from = to_date("date_from", *v);
  if (auto v = single(params, "date_to")) q.date_to = to_date("date_to", *v);
  auto [lo, hi] = params.equal_range("dataset");
  for (auto it = lo; it != hi; ++it) {
    std::string_view rest = it->second;
    while (true) {
      auto comma = rest.find(',');
      auto code = rest.substr(0, comma);
      if (code.empty()) throw InvalidQuery("empty dataset code");
      if (std::find(q.datasets.begin(), q.datasets.end(), code) == q.datasets.end()) q.datasets.emplace_back(code);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  if (auto v = single(params, "page")) q.page = to_int("page", *v);
  if (auto v = single(params, "page_size")) q.page_size = to_int("page_size", *v);
  validate_query(q);
  return q;
}

Service::Service(IndexSource index, std::shared_ptr<const Tokenizer> tokenizer)
    : index_(std::move(index)), tokenizer_(std::move(tokenizer)) {
  if (!tokenizer_) tokenizer_ = make_tokenizer("word-fallback");
}

Response Service::handle(std::string_view method, std::string_view target) const {
  IndexPtr idx;
  try {
    idx = index_();
  } catch (const std::exception& e) {
    return error_response({500, "internal", e.what()}, 0);
  }
  const std::uint64_t version = idx->snapshot_version();
  try {
    if (method != "GET" && method != "HEAD")
      return error_response({400, "unsupported_method", "only GET is supported"}, version);
    auto qpos = target.find('?');
    auto path = target.substr(0, qpos);
    Params params = qpos == std::string_view::npos ? Params{} : parse_query_string(target.substr(qpos + 1));
    auto seg = split_path(path);
    if (seg.empty() || seg[0] != "v1") return error_response({404, "not_found", "no such endpoint"}, version);
    if (seg.size() == 2 && seg[1] == "stats") return stats(*idx, params);
    if (seg.size() >= 3) {
      auto kind = collection(seg[1]);
      if (kind && seg.size() == 3 && seg[2] == "search") return search(*idx, *kind, params);
      if (kind && seg.size() >= 4) {
        // Citations may carry an encoded or literal slash.
        std::string citation(seg[3]);
        for (std::size_t i = 4; i < seg.size(); ++i) citation += "/" + std::string(seg[i]);
        return document(*idx, *kind, url_decode(seg[2]), url_decode(citation));
      }
    }
    return error_response({404, "not_found", "no such endpoint"}, version);
  } catch (const InvalidQuery& e) {
    return error_response({400, "invalid_query", e.what()}, version);
  } catch (const std::exception& e) {
    return error_response({500, "internal", e.what()}, version);
  }
}

Response Service::search(const Index& idx, DocumentKind kind, const Params& params) const {
  auto q = query_from_params(params, kind);
  return json_response(200, to_json(idx.search(q)), idx.snapshot_version());
}

Response Service::document(const Index& idx, DocumentKind kind, std::string_view dataset,
                           std::string_view citation) const {
  const DocumentRecord* r = idx.snapshot().find(dataset, normalize_citation(citation));
  if (!r || r->kind != kind)
    return error_response({404, "not_found", "no " + std::string(to_string(kind)) + " " + std::string(dataset) + "/" +
                                                 std::string(citation)},
                          idx.snapshot_version());
  return json_response(200, record_to_json(*r), idx.snapshot_version());
}

Response Service::stats(const Index& idx, const Params& params) const {
  std::optional<DocumentKind> kind;
  for (auto& [k, v] : params) {
    if (k != "kind") throw InvalidQuery("unknown parameter " + k);
    kind = parse_kind(v);
    if (!kind) throw InvalidQuery("kind must be case or law");
  }
  return json_response(200, to_json(coverage(idx.snapshot(), kind)), idx.snapshot_version());
}

CoverageTable Service::coverage(const CorpusSnapshot& snap, std::optional<DocumentKind> kind) const {
  std::pair<std::uint64_t, int> key{snap.version(), kind ? static_cast<int>(*kind) : -1};
  {
    std::lock_guard lock(cache_mutex_);
    auto it = coverage_cache_.find(key);
    if (it != coverage_cache_.end()) return it->second;
  }
  auto table = coverage_stats(snap, *tokenizer_, kind);
  std::lock_guard lock(cache_mutex_);
  std::erase_if(coverage_cache_, [&](auto& e) { return e.first.first != snap.version(); });
  coverage_cache_.emplace(key, table);
  return table;
}

}  // namespace openlex::api
