#include "openlex/model/validate.hpp"

#include <map>

namespace openlex {

namespace {

bool valid_dataset_code(std::string_view code) {
  if (code.empty() || code.size() > 32) return false;
  for (char c : code) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

bool blank(const std::optional<std::string>& s) {
  return !s || normalize_citation(*s).empty();
}

}  // namespace

bool ValidationResult::has(std::string_view code) const {
  for (auto& v : violations)
    if (v.code == code) return true;
  return false;
}

std::string ValidationResult::summary() const {
  std::string out;
  for (auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationResult validate_record(const DocumentRecord& r) {
  ValidationResult res;
  auto add = [&](std::string code, std::string msg) {
    res.violations.push_back({std::move(code), std::move(msg)});
  };

  if (!valid_dataset_code(r.dataset)) add("bad_dataset", "dataset code must be short uppercase alphanumeric");
  if (blank(r.citation_en) && blank(r.citation_fr))
    add("no_citation", "no citation in either language");
  if (!r.has_text(Language::kEn) && !r.has_text(Language::kFr))
    add("no_text", "no text in either language");
  if (r.upstream_license.empty()) add("no_license", "upstream license is empty");

  if (r.kind == DocumentKind::kCase &&
      ((r.unofficial_sections_en && !r.unofficial_sections_en->empty()) ||
       (r.unofficial_sections_fr && !r.unofficial_sections_fr->empty())))
    add("sections_on_case", "sections on a case record");

  for (Language l : kLanguages) {
    if (!r.has_text(l)) continue;
    std::string lang{to_string(l)};
    if (!r.url(l) || r.url(l)->empty()) add("missing_url_" + lang, "text in " + lang + " without a url");
    if (!r.scraped_timestamp(l))
      add("missing_timestamp_" + lang, "text in " + lang + " without a scraped timestamp");
  }

  if (r.document_date_en && r.document_date_fr && *r.document_date_en != *r.document_date_fr)
    add("date_mismatch", "English and French document dates differ");

  for (Language l : kLanguages) {
    if (!r.sections(l)) continue;
    for (auto& s : *r.sections(l)) {
      if (s.label.empty()) {
        add("empty_section_label", std::string("section without a label (") + std::string(to_string(l)) + ")");
        break;
      }
    }
  }
  return res;
}

ValidationResult validate_corpus(std::span<const DocumentRecord> records) {
  ValidationResult res;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto one = validate_record(r);
    for (auto& v : one.violations)
      res.violations.push_back({v.code, record_key(r).str() + ": " + v.message});
    // A record may carry the same citation in both languages; count it once.
    std::map<std::pair<std::string, std::string>, bool> own;
    for (Language l : kLanguages) {
      if (blank(r.citation(l))) continue;
      own[{r.dataset, normalize_citation(*r.citation(l))}] = true;
    }
    for (auto& [k, _] : own) {
      auto [it, inserted] = seen.emplace(k, i);
      if (!inserted)
        res.violations.push_back(
            {"duplicate_key", k.first + "/" + k.second + ": citation used by more than one record"});
    }
  }
  return res;
}

}  // namespace openlex
