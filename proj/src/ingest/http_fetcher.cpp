#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "openlex/ingest/fetch.hpp"

namespace openlex::ingest {

FetchResult HttpFetcher::fetch(const std::string& url) {
  std::string origin = url_origin(url);
  if (origin.empty() || url.rfind("file:", 0) == 0) return files_.fetch(url);
  if (origin.rfind("http://", 0) != 0 && origin.rfind("https://", 0) != 0)
    throw FetchError("unsupported URL scheme: " + url);

  std::string current = url;
  for (int hop = 0; hop <= options_.max_redirects; ++hop) {
    origin = url_origin(current);
    std::string target = current.substr(origin.size());
    if (target.empty()) target = "/";
    if (auto hash = target.find('#'); hash != std::string::npos) target.resize(hash);

    httplib::Client client(origin);
    client.set_connection_timeout(options_.connect_timeout);
    client.set_read_timeout(options_.read_timeout);
    client.set_follow_location(false);
    httplib::Headers headers{{"User-Agent", options_.user_agent}};
    auto res = client.Get(target, headers);
    if (!res) throw FetchError(url + ": " + httplib::to_string(res.error()));
    if (res->status >= 300 && res->status < 400 && res->has_header("Location")) {
      current = resolve_url(current, res->get_header_value("Location"));
      continue;
    }
    if (res->status < 200 || res->status >= 300) throw FetchError(url + ": HTTP " + std::to_string(res->status));
    std::string type = res->get_header_value("Content-Type");
    type = type.substr(0, type.find(';'));
    while (!type.empty() && type.back() == ' ') type.pop_back();
    for (auto& c : type) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (type.empty()) type = guess_content_type(current);
    return {std::move(res->body), type, current};
  }
  throw FetchError(url + ": too many redirects");
}

}  // namespace openlex::ingest
