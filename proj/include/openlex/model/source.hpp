#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "openlex/model/record.hpp"
#include "openlex/model/validate.hpp"

namespace openlex {

enum class Channel { kListingScrape, kRss, kLawRepoSync, kFileDrop };
enum class Schedule { kDaily, kWeekly };

std::string_view to_string(Channel c);
std::optional<Channel> parse_channel(std::string_view s);

/// Extraction rule for one field: a CSS-style selector evaluated relative to
/// a listing row, and an attribute to read (text content when empty).
struct CellRule {
  std::string selector;
  std::string attribute;

  bool empty() const { return selector.empty() && attribute.empty(); }
};

/// Declarative extraction rules, so adding a court is a registry edit.
struct SelectorConfig {
  std::string row;          // selects one element per listed decision
  CellRule citation;
  CellRule name;
  CellRule date;
  CellRule link;            // usually {"a", "href"}
  std::string date_format = "auto";  // see parse_date()
  std::string content;      // selector for the decision body on fetched pages
  /// ECMAScript regex locating a neutral citation inside feed titles or
  /// listing cells. Group 0 is taken as the citation.
  std::string citation_pattern = R"(\b(1[89]|20)\d{2}\s+[A-Z][A-Z-]{1,9}\s+\d{1,6}\b)";
};

struct SourceDescriptor {
  std::string dataset;
  DocumentKind kind = DocumentKind::kCase;
  Channel channel = Channel::kListingScrape;
  Language language = Language::kEn;
  std::string listing_url;
  std::string feed_url;
  std::string repo_path;
  std::string drop_path;
  SelectorConfig selectors;
  std::string license_text;
  double politeness_delay = 1.0;  // seconds between fetches to one host
  Schedule schedule = Schedule::kDaily;
};

ValidationResult validate_source(const SourceDescriptor& s);

/// Reads a JSON registry: an array of source objects (or {"sources": [...]}).
/// Throws ConfigError naming the offending entry.
std::vector<SourceDescriptor> load_source_registry(const std::filesystem::path& path);
std::vector<SourceDescriptor> parse_source_registry(std::string_view json_text);

}  // namespace openlex
