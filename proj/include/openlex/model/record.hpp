#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "openlex/model/date.hpp"

namespace openlex {

enum class DocumentKind { kCase, kLaw };
enum class Language { kEn, kFr };

std::string_view to_string(DocumentKind k);  // "case" / "law"
std::optional<DocumentKind> parse_kind(std::string_view s);
std::string_view to_string(Language l);  // "en" / "fr"
std::optional<Language> parse_language(std::string_view s);

struct LawSection {
  std::string label;
  std::optional<std::string> heading;
  std::string text;

  bool operator==(const LawSection&) const = default;
};

/// One legal document. Bilingual fields are parallel `_en` / `_fr` members
/// whose names are the published column names.
struct DocumentRecord {
  std::string dataset;
  DocumentKind kind = DocumentKind::kCase;

  std::optional<std::string> citation_en;
  std::optional<std::string> citation_fr;
  std::optional<std::string> citation2_en;
  std::optional<std::string> citation2_fr;
  std::optional<std::string> name_en;
  std::optional<std::string> name_fr;
  std::optional<Date> document_date_en;
  std::optional<Date> document_date_fr;
  std::optional<std::string> url_en;
  std::optional<std::string> url_fr;
  std::optional<Timestamp> scraped_timestamp_en;
  std::optional<Timestamp> scraped_timestamp_fr;
  std::optional<std::string> unofficial_text_en;
  std::optional<std::string> unofficial_text_fr;
  std::optional<std::vector<LawSection>> unofficial_sections_en;
  std::optional<std::vector<LawSection>> unofficial_sections_fr;

  std::string upstream_license;

  bool operator==(const DocumentRecord&) const = default;

  // Per-language accessors over the suffixed members.
  std::optional<std::string>& citation(Language l) { return l == Language::kEn ? citation_en : citation_fr; }
  const std::optional<std::string>& citation(Language l) const { return l == Language::kEn ? citation_en : citation_fr; }
  std::optional<std::string>& citation2(Language l) { return l == Language::kEn ? citation2_en : citation2_fr; }
  const std::optional<std::string>& citation2(Language l) const { return l == Language::kEn ? citation2_en : citation2_fr; }
  std::optional<std::string>& name(Language l) { return l == Language::kEn ? name_en : name_fr; }
  const std::optional<std::string>& name(Language l) const { return l == Language::kEn ? name_en : name_fr; }
  std::optional<Date>& document_date(Language l) { return l == Language::kEn ? document_date_en : document_date_fr; }
  const std::optional<Date>& document_date(Language l) const { return l == Language::kEn ? document_date_en : document_date_fr; }
  std::optional<std::string>& url(Language l) { return l == Language::kEn ? url_en : url_fr; }
  const std::optional<std::string>& url(Language l) const { return l == Language::kEn ? url_en : url_fr; }
  std::optional<Timestamp>& scraped_timestamp(Language l) { return l == Language::kEn ? scraped_timestamp_en : scraped_timestamp_fr; }
  const std::optional<Timestamp>& scraped_timestamp(Language l) const { return l == Language::kEn ? scraped_timestamp_en : scraped_timestamp_fr; }
  std::optional<std::string>& text(Language l) { return l == Language::kEn ? unofficial_text_en : unofficial_text_fr; }
  const std::optional<std::string>& text(Language l) const { return l == Language::kEn ? unofficial_text_en : unofficial_text_fr; }
  std::optional<std::vector<LawSection>>& sections(Language l) { return l == Language::kEn ? unofficial_sections_en : unofficial_sections_fr; }
  const std::optional<std::vector<LawSection>>& sections(Language l) const { return l == Language::kEn ? unofficial_sections_en : unofficial_sections_fr; }

  bool has_text(Language l) const { return text(l) && !text(l)->empty(); }
};

inline constexpr Language kLanguages[] = {Language::kEn, Language::kFr};

/// Trim, then collapse internal whitespace runs. Case is significant.
std::string normalize_citation(std::string_view citation);

/// Store key: dataset plus the normalized primary citation (English when
/// present, French otherwise).
struct RecordKey {
  std::string dataset;
  std::string citation;

  auto operator<=>(const RecordKey&) const = default;
  std::string str() const { return dataset + "/" + citation; }
};

std::string primary_citation(const DocumentRecord& r);
RecordKey record_key(const DocumentRecord& r);
/// English date when present, French otherwise.
std::optional<Date> primary_date(const DocumentRecord& r);
/// English name when present, French otherwise.
std::string primary_name(const DocumentRecord& r);

/// Scan order: (dataset, date, citation); undated records sort first.
bool scan_order_less(const DocumentRecord& a, const DocumentRecord& b);

}  // namespace openlex
