#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "openlex/error.hpp"

namespace openlex::ingest {

/// Transport failure: connection errors, timeouts, non-2xx responses,
/// unreadable files.
class FetchError : public Error {
 public:
  using Error::Error;
};

struct FetchResult {
  std::string body;
  std::string content_type;  // lowercased media type without parameters; may be empty
  std::string final_url;
};

class Fetcher {
 public:
  virtual ~Fetcher() = default;
  /// Throws FetchError.
  virtual FetchResult fetch(const std::string& url) = 0;
};

/// Scheme, host and port of an absolute URL ("https://a.ca:8443"); empty when
/// `url` is not absolute.
std::string url_origin(std::string_view url);
/// Lowercased host name, or empty.
std::string url_host(std::string_view url);
/// Resolves `ref` against `base` (RFC 3986 reference resolution, enough for
/// listing links: absolute, scheme-relative, absolute-path and relative refs).
std::string resolve_url(std::string_view base, std::string_view ref);

/// Media type guessed from a file name or URL path extension.
std::string guess_content_type(std::string_view path);

/// Reads `file://` URLs and plain paths.
class FileFetcher : public Fetcher {
 public:
  FetchResult fetch(const std::string& url) override;
};

struct HttpOptions {
  std::chrono::seconds connect_timeout{10};
  std::chrono::seconds read_timeout{30};
  std::string user_agent = "openlex-ingest/1.0";
  int max_redirects = 5;
};

/// HTTP(S) GET. `file://` URLs and bare paths go to a FileFetcher.
class HttpFetcher : public Fetcher {
 public:
  explicit HttpFetcher(HttpOptions options = {}) : options_(std::move(options)) {}
  FetchResult fetch(const std::string& url) override;

 private:
  HttpOptions options_;
  FileFetcher files_;
};

/// Serializes fetches per host and keeps at least `delay` between the end of
/// one fetch and the start of the next to the same host. Different hosts
/// proceed independently. Local files have no host and are never delayed.
class PoliteFetcher : public Fetcher {
 public:
  using Clock = std::chrono::steady_clock;
  using Sleep = std::function<void(Clock::duration)>;

  PoliteFetcher(Fetcher& inner, std::chrono::duration<double> delay, Sleep sleep = {});
  FetchResult fetch(const std::string& url) override;

 private:
  struct Host {
    std::mutex mutex;
    std::optional<Clock::time_point> last;
  };
  Host& host(const std::string& name);

  Fetcher& inner_;
  Clock::duration delay_;
  Sleep sleep_;
  std::mutex hosts_mutex_;
  std::map<std::string, std::unique_ptr<Host>> hosts_;
};

}  // namespace openlex::ingest
