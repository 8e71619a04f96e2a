#include "openlex/model/record_json.hpp"

#include "openlex/error.hpp"

namespace openlex {

namespace {

template <typename T, typename F>
ordered_json opt(const std::optional<T>& v, F&& f) {
  return v ? ordered_json(f(*v)) : ordered_json(nullptr);
}

ordered_json opt_str(const std::optional<std::string>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json sections_json(const std::optional<std::vector<LawSection>>& v) {
  if (!v) return nullptr;
  ordered_json arr = ordered_json::array();
  for (auto& s : *v) {
    ordered_json o;
    o["label"] = s.label;
    o["heading"] = opt_str(s.heading);
    o["text"] = s.text;
    arr.push_back(std::move(o));
  }
  return arr;
}

std::optional<std::string> get_str(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ConfigError(std::string("field ") + key + " must be a string");
  return it->get<std::string>();
}

std::optional<Date> get_date(const nlohmann::json& j, const char* key) {
  auto s = get_str(j, key);
  if (!s) return std::nullopt;
  auto d = Date::from_iso(*s);
  if (!d) throw ConfigError(std::string("field ") + key + " is not an ISO date: " + *s);
  return d;
}

std::optional<Timestamp> get_ts(const nlohmann::json& j, const char* key) {
  auto s = get_str(j, key);
  if (!s) return std::nullopt;
  auto t = parse_timestamp(*s);
  if (!t) throw ConfigError(std::string("field ") + key + " is not a UTC timestamp: " + *s);
  return t;
}

std::optional<std::vector<LawSection>> get_sections(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) throw ConfigError(std::string("field ") + key + " must be an array");
  std::vector<LawSection> out;
  for (auto& s : *it) {
    LawSection sec;
    sec.label = s.value("label", "");
    sec.heading = get_str(s, "heading");
    sec.text = s.value("text", "");
    out.push_back(std::move(sec));
  }
  return out;
}

}  // namespace

ordered_json record_to_json(const DocumentRecord& r) {
  auto date = [](const Date& d) { return d.iso(); };
  auto ts = [](const Timestamp& t) { return format_timestamp(t); };
  ordered_json j;
  j["dataset"] = r.dataset;
  j["citation_en"] = opt_str(r.citation_en);
  j["citation_fr"] = opt_str(r.citation_fr);
  j["citation2_en"] = opt_str(r.citation2_en);
  j["citation2_fr"] = opt_str(r.citation2_fr);
  j["name_en"] = opt_str(r.name_en);
  j["name_fr"] = opt_str(r.name_fr);
  j["document_date_en"] = opt(r.document_date_en, date);
  j["document_date_fr"] = opt(r.document_date_fr, date);
  j["url_en"] = opt_str(r.url_en);
  j["url_fr"] = opt_str(r.url_fr);
  j["scraped_timestamp_en"] = opt(r.scraped_timestamp_en, ts);
  j["scraped_timestamp_fr"] = opt(r.scraped_timestamp_fr, ts);
  j["unofficial_text_en"] = opt_str(r.unofficial_text_en);
  j["unofficial_text_fr"] = opt_str(r.unofficial_text_fr);
  if (r.kind == DocumentKind::kLaw) {
    j["unofficial_sections_en"] = sections_json(r.unofficial_sections_en);
    j["unofficial_sections_fr"] = sections_json(r.unofficial_sections_fr);
  }
  j["upstream_license"] = r.upstream_license;
  return j;
}

ordered_json record_to_stored_json(const DocumentRecord& r) {
  ordered_json j;
  j["kind"] = to_string(r.kind);
  ordered_json fields = record_to_json(r);
  for (auto& [k, v] : fields.items()) j[k] = v;
  return j;
}

DocumentRecord record_from_json(const nlohmann::json& j, std::optional<DocumentKind> kind) {
  if (!j.is_object()) throw ConfigError("document must be a JSON object");
  DocumentRecord r;
  if (kind) {
    r.kind = *kind;
  } else if (auto k = get_str(j, "kind")) {
    auto pk = parse_kind(*k);
    if (!pk) throw ConfigError("unknown kind: " + *k);
    r.kind = *pk;
  } else {
    r.kind = (j.contains("unofficial_sections_en") || j.contains("unofficial_sections_fr"))
                 ? DocumentKind::kLaw
                 : DocumentKind::kCase;
  }
  r.dataset = get_str(j, "dataset").value_or("");
  r.citation_en = get_str(j, "citation_en");
  r.citation_fr = get_str(j, "citation_fr");
  r.citation2_en = get_str(j, "citation2_en");
  r.citation2_fr = get_str(j, "citation2_fr");
  r.name_en = get_str(j, "name_en");
  r.name_fr = get_str(j, "name_fr");
  r.document_date_en = get_date(j, "document_date_en");
  r.document_date_fr = get_date(j, "document_date_fr");
  r.url_en = get_str(j, "url_en");
  r.url_fr = get_str(j, "url_fr");
  r.scraped_timestamp_en = get_ts(j, "scraped_timestamp_en");
  r.scraped_timestamp_fr = get_ts(j, "scraped_timestamp_fr");
  r.unofficial_text_en = get_str(j, "unofficial_text_en");
  r.unofficial_text_fr = get_str(j, "unofficial_text_fr");
  r.unofficial_sections_en = get_sections(j, "unofficial_sections_en");
  r.unofficial_sections_fr = get_sections(j, "unofficial_sections_fr");
  r.upstream_license = get_str(j, "upstream_license").value_or("");
  return r;
}

}  // namespace openlex
