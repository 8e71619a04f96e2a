#include "openlex/ingest/fetch.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

namespace openlex::ingest {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Length of "scheme:" when `s` starts with a URI scheme, else 0.
std::size_t scheme_length(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == ':') return i > 0 ? i + 1 : 0;
    bool ok = std::isalpha(static_cast<unsigned char>(c)) ||
              (i > 0 && (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.'));
    if (!ok) return 0;
  }
  return 0;
}

// RFC 3986 section 5.2.4.
std::string remove_dot_segments(std::string in) {
  std::string out;
  auto drop_last = [&] {
    auto slash = out.rfind('/');
    out.erase(slash == std::string::npos ? 0 : slash);
  };
  while (!in.empty()) {
    if (in.rfind("../", 0) == 0) {
      in.erase(0, 3);
    } else if (in.rfind("./", 0) == 0) {
      in.erase(0, 2);
    } else if (in.rfind("/./", 0) == 0) {
      in.erase(0, 2);
    } else if (in == "/.") {
      in = "/";
    } else if (in.rfind("/../", 0) == 0) {
      in.erase(0, 3);
      drop_last();
    } else if (in == "/..") {
      in = "/";
      drop_last();
    } else if (in == "." || in == "..") {
      in.clear();
    } else {
      std::size_t end = in.find('/', in[0] == '/' ? 1 : 0);
      if (end == std::string::npos) end = in.size();
      out += in.substr(0, end);
      in.erase(0, end);
    }
  }
  return out;
}

}  // namespace

std::string url_origin(std::string_view url) {
  std::size_t sl = scheme_length(url);
  if (sl == 0 || url.substr(sl, 2) != "//") return {};
  std::size_t end = url.find_first_of("/?#", sl + 2);
  return std::string(url.substr(0, end));
}

std::string url_host(std::string_view url) {
  std::string origin = url_origin(url);
  if (origin.empty()) return {};
  std::string_view auth = std::string_view(origin).substr(origin.find("//") + 2);
  if (auto at = auth.rfind('@'); at != std::string_view::npos) auth = auth.substr(at + 1);
  if (!auth.empty() && auth[0] == '[') return lower(auth.substr(0, auth.find(']') + 1));
  return lower(auth.substr(0, auth.find(':')));
}

std::string resolve_url(std::string_view base, std::string_view ref) {
  if (ref.empty()) return std::string(base.substr(0, base.find('#')));
  if (scheme_length(ref) > 0) return std::string(ref);
  std::size_t sl = scheme_length(base);
  if (ref.substr(0, 2) == "//") return std::string(base.substr(0, sl)) + std::string(ref);
  std::string origin = url_origin(base);
  std::string_view rest = base.substr(origin.size());
  std::string_view base_path = rest.substr(0, rest.find_first_of("?#"));
  if (ref[0] == '#') return std::string(base.substr(0, base.find('#'))) + std::string(ref);
  if (ref[0] == '?') return origin + std::string(base_path) + std::string(ref);

  std::string_view ref_path = ref.substr(0, ref.find_first_of("?#"));
  std::string_view ref_tail = ref.substr(ref_path.size());
  std::string merged;
  if (ref[0] == '/') {
    merged = std::string(ref_path);
  } else {
    std::size_t slash = base_path.rfind('/');
    merged = (slash == std::string_view::npos ? std::string(origin.empty() ? "" : "/")
                                              : std::string(base_path.substr(0, slash + 1))) +
             std::string(ref_path);
  }
  return origin + remove_dot_segments(merged) + std::string(ref_tail);
}

std::string guess_content_type(std::string_view path) {
  std::string_view p = path.substr(0, path.find_first_of("?#"));
  auto dot = p.rfind('.');
  if (dot == std::string_view::npos || p.find('/', dot) != std::string_view::npos) return {};
  std::string ext = lower(p.substr(dot + 1));
  if (ext == "html" || ext == "htm" || ext == "xhtml") return "text/html";
  if (ext == "xml") return "application/xml";
  if (ext == "txt" || ext == "text") return "text/plain";
  if (ext == "rss") return "application/rss+xml";
  if (ext == "atom") return "application/atom+xml";
  if (ext == "pdf") return "application/pdf";
  if (ext == "json") return "application/json";
  return {};
}

FetchResult FileFetcher::fetch(const std::string& url) {
  std::string path = url;
  if (path.rfind("file://", 0) == 0) {
    path = path.substr(7);
    // file://host/path is not supported; file:///path and file://path are.
  } else if (scheme_length(path) > 2) {
    throw FetchError("unsupported URL scheme: " + url);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FetchError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FetchError("read failed: " + path);
  return {ss.str(), guess_content_type(path), url};
}

PoliteFetcher::PoliteFetcher(Fetcher& inner, std::chrono::duration<double> delay, Sleep sleep)
    : inner_(inner),
      delay_(std::chrono::duration_cast<Clock::duration>(delay)),
      sleep_(sleep ? std::move(sleep) : Sleep([](Clock::duration d) { std::this_thread::sleep_for(d); })) {}

PoliteFetcher::Host& PoliteFetcher::host(const std::string& name) {
  std::lock_guard lock(hosts_mutex_);
  auto& h = hosts_[name];
  if (!h) h = std::make_unique<Host>();
  return *h;
}

FetchResult PoliteFetcher::fetch(const std::string& url) {
  std::string name = url_host(url);
  if (name.empty()) return inner_.fetch(url);
  Host& h = host(name);
  std::lock_guard lock(h.mutex);
  if (h.last) {
    auto ready = *h.last + delay_;
    auto now = Clock::now();
    if (now < ready) sleep_(ready - now);
  }
  struct Stamp {
    Host& h;
    ~Stamp() { h.last = Clock::now(); }
  } stamp{h};
  return inner_.fetch(url);
}

}  // namespace openlex::ingest
