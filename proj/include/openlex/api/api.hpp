#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "json.hpp"

#include "openlex/search/search.hpp"
#include "openlex/store/coverage.hpp"

namespace openlex::api {

using ordered_json = nlohmann::ordered_json;
using Params = std::multimap<std::string, std::string>;

inline constexpr const char* kVersionHeader = "X-Snapshot-Version";

struct ApiError {
  int status = 500;  // 400, 404 or 500
  std::string code;  // invalid_query, not_found, internal
  std::string message;
};

struct Response {
  int status = 200;
  std::string body;
  std::uint64_t snapshot_version = 0;
  std::string content_type = "application/json";
};

ordered_json to_json(const SearchHit& h);
ordered_json to_json(const SearchPage& p);
ordered_json to_json(const CoverageTable& t);
ordered_json to_json(const ApiError& e);

/// Search parameters as they arrive on the wire. Recognized keys are
/// citation, name, text, date_from, date_to, dataset (repeatable or
/// comma-separated), page and page_size; anything else is rejected.
/// Throws InvalidQuery.
QuerySpec query_from_params(const Params& params, DocumentKind kind);

/// Percent-decoding; `plus_is_space` applies to query strings.
std::string url_decode(std::string_view s, bool plus_is_space = false);
Params parse_query_string(std::string_view qs);

/// Routes:
///   GET /v1/cases/search, /v1/laws/search
///   GET /v1/cases/{dataset}/{citation}, /v1/laws/{dataset}/{citation}
///   GET /v1/stats[?kind=case|law]
class Service {
 public:
  Service(IndexSource index, std::shared_ptr<const Tokenizer> tokenizer);

  /// `target` is the request path with its query string.
  Response handle(std::string_view method, std::string_view target) const;

 private:
  Response search(const Index& idx, DocumentKind kind, const Params& params) const;
  Response document(const Index& idx, DocumentKind kind, std::string_view dataset,
                    std::string_view citation) const;
  Response stats(const Index& idx, const Params& params) const;
  CoverageTable coverage(const CorpusSnapshot& snap, std::optional<DocumentKind> kind) const;

  IndexSource index_;
  std::shared_ptr<const Tokenizer> tokenizer_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<std::uint64_t, int>, CoverageTable> coverage_cache_;
};

/// Blocks serving HTTP/1.1 until the process is stopped. Throws IoError
/// when the address cannot be bound.
void serve(const Service& service, const std::string& host, int port);

}  // namespace openlex::api
