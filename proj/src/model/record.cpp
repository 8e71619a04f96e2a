#include "openlex/model/record.hpp"

#include <functional>
#include <tuple>

#include "openlex/text/utf8.hpp"

namespace openlex {

std::string_view to_string(DocumentKind k) { return k == DocumentKind::kCase ? "case" : "law"; }

std::optional<DocumentKind> parse_kind(std::string_view s) {
  if (s == "case" || s == "cases") return DocumentKind::kCase;
  if (s == "law" || s == "laws") return DocumentKind::kLaw;
  return std::nullopt;
}

std::string_view to_string(Language l) { return l == Language::kEn ? "en" : "fr"; }

std::optional<Language> parse_language(std::string_view s) {
  if (s == "en") return Language::kEn;
  if (s == "fr") return Language::kFr;
  return std::nullopt;
}

std::string normalize_citation(std::string_view citation) {
  return text::collapse_whitespace(citation);
}

std::string primary_citation(const DocumentRecord& r) {
  if (r.citation_en) {
    std::string c = normalize_citation(*r.citation_en);
    if (!c.empty()) return c;
  }
  return r.citation_fr ? normalize_citation(*r.citation_fr) : std::string{};
}

RecordKey record_key(const DocumentRecord& r) { return {r.dataset, primary_citation(r)}; }

std::optional<Date> primary_date(const DocumentRecord& r) {
  return r.document_date_en ? r.document_date_en : r.document_date_fr;
}

std::string primary_name(const DocumentRecord& r) {
  if (r.name_en && !r.name_en->empty()) return *r.name_en;
  return r.name_fr.value_or("");
}

bool scan_order_less(const DocumentRecord& a, const DocumentRecord& b) {
  auto da = primary_date(a), db = primary_date(b);
  auto ka = std::make_tuple(std::cref(a.dataset), da.has_value(), da.value_or(Date{}), primary_citation(a));
  auto kb = std::make_tuple(std::cref(b.dataset), db.has_value(), db.value_or(Date{}), primary_citation(b));
  return ka < kb;
}

}  // namespace openlex
