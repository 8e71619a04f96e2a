#include "openlex/model/source.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "openlex/error.hpp"

namespace openlex {

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::kListingScrape: return "listing-scrape";
    case Channel::kRss: return "rss";
    case Channel::kLawRepoSync: return "law-repo-sync";
    case Channel::kFileDrop: return "file-drop";
  }
  return "?";
}

std::optional<Channel> parse_channel(std::string_view s) {
  if (s == "listing-scrape") return Channel::kListingScrape;
  if (s == "rss") return Channel::kRss;
  if (s == "law-repo-sync") return Channel::kLawRepoSync;
  if (s == "file-drop") return Channel::kFileDrop;
  return std::nullopt;
}

ValidationResult validate_source(const SourceDescriptor& s) {
  ValidationResult res;
  auto add = [&](std::string code, std::string msg) {
    res.violations.push_back({std::move(code), std::move(msg)});
  };
  if (s.dataset.empty()) add("no_dataset", "source has no dataset code");
  if (s.license_text.empty()) add("no_license", "source has no license text");
  if (s.politeness_delay < 0) add("bad_delay", "politeness delay is negative");
  switch (s.channel) {
    case Channel::kListingScrape:
      if (s.listing_url.empty()) add("no_listing_url", "listing-scrape source needs listing_url");
      if (s.selectors.row.empty() || s.selectors.link.empty())
        add("no_selectors", "listing-scrape source needs row and link selectors");
      break;
    case Channel::kRss:
      if (s.feed_url.empty()) add("no_feed_url", "rss source needs feed_url");
      break;
    case Channel::kLawRepoSync:
      if (s.repo_path.empty()) add("no_repo_path", "law-repo-sync source needs repo_path");
      break;
    case Channel::kFileDrop:
      if (s.drop_path.empty()) add("no_drop_path", "file-drop source needs drop_path");
      break;
  }
  return res;
}

namespace {

CellRule cell_from_json(const nlohmann::json& j) {
  CellRule c;
  if (j.is_string()) {
    c.selector = j.get<std::string>();
  } else if (j.is_object()) {
    c.selector = j.value("selector", "");
    c.attribute = j.value("attribute", "");
  }
  return c;
}

SourceDescriptor source_from_json(const nlohmann::json& j, std::size_t index) {
  auto where = "source #" + std::to_string(index);
  if (!j.is_object()) throw ConfigError(where + " is not an object");
  SourceDescriptor s;
  s.dataset = j.value("dataset", "");
  where += " (" + s.dataset + ")";
  auto kind = parse_kind(j.value("kind", "case"));
  if (!kind) throw ConfigError(where + ": unknown kind");
  s.kind = *kind;

  // Exactly one channel.
  int channels = 0;
  if (j.contains("channel")) {
    auto c = parse_channel(j.at("channel").get<std::string>());
    if (!c) throw ConfigError(where + ": unknown channel");
    s.channel = *c;
    ++channels;
  }
  if (channels != 1) throw ConfigError(where + ": exactly one channel is required");

  auto lang = parse_language(j.value("language", "en"));
  if (!lang) throw ConfigError(where + ": language must be en or fr");
  s.language = *lang;
  s.listing_url = j.value("listing_url", "");
  s.feed_url = j.value("feed_url", "");
  s.repo_path = j.value("repo_path", "");
  s.drop_path = j.value("drop_path", "");
  s.license_text = j.value("license_text", "");
  s.politeness_delay = j.value("politeness_delay", 1.0);
  auto sched = j.value("schedule", "daily");
  if (sched == "daily")
    s.schedule = Schedule::kDaily;
  else if (sched == "weekly")
    s.schedule = Schedule::kWeekly;
  else
    throw ConfigError(where + ": schedule must be daily or weekly");

  if (auto it = j.find("selectors"); it != j.end()) {
    const auto& sel = *it;
    s.selectors.row = sel.value("row", "");
    if (sel.contains("citation")) s.selectors.citation = cell_from_json(sel["citation"]);
    if (sel.contains("name")) s.selectors.name = cell_from_json(sel["name"]);
    if (sel.contains("date")) s.selectors.date = cell_from_json(sel["date"]);
    if (sel.contains("link")) s.selectors.link = cell_from_json(sel["link"]);
    s.selectors.date_format = sel.value("date_format", "auto");
    s.selectors.content = sel.value("content", "");
    if (sel.contains("citation_pattern")) s.selectors.citation_pattern = sel["citation_pattern"];
  }

  auto v = validate_source(s);
  if (!v.ok()) throw ConfigError(where + ": " + v.summary());
  return s;
}

}  // namespace

std::vector<SourceDescriptor> parse_source_registry(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("source registry: ") + e.what());
  }
  const nlohmann::json& list = j.is_object() && j.contains("sources") ? j["sources"] : j;
  if (!list.is_array()) throw ConfigError("source registry must be an array of sources");
  std::vector<SourceDescriptor> out;
  try {
    for (std::size_t i = 0; i < list.size(); ++i) out.push_back(source_from_json(list[i], i));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("source registry: ") + e.what());
  }
  return out;
}

std::vector<SourceDescriptor> load_source_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read source registry " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_source_registry(ss.str());
}

}  // namespace openlex
