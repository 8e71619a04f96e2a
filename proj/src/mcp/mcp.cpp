#include "openlex/mcp/mcp.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "openlex/api/api.hpp"
#include "openlex/model/record_json.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::mcp {

namespace {

constexpr const char* kProtocolVersion = "2025-06-18";

json str_prop(const std::string& description) { return {{"type", "string"}, {"description", description}}; }

json search_schema(const std::string& what) {
  json props;
  props["citation"] = str_prop("Neutral or alternate citation, matched exactly after whitespace normalization");
  props["name"] = str_prop("Substring of the " + what + " name, case and accent insensitive");
  props["text"] = str_prop("Words that must all appear in the full text");
  props["date_from"] = str_prop("Earliest date, YYYY-MM-DD, inclusive");
  props["date_to"] = str_prop("Latest date, YYYY-MM-DD, inclusive");
  props["dataset"] = {{"type", "array"}, {"items", {{"type", "string"}}}, {"description", "Dataset codes, any of"}};
  props["page"] = {{"type", "integer"}, {"description", "1-based page number"}};
  props["page_size"] = {{"type", "integer"}, {"description", "Hits per page, 1 to 200"}};
  return {{"type", "object"}, {"properties", props}, {"additionalProperties", false}};
}

json search_output_schema() {
  return {{"type", "object"},
          {"properties",
           {{"total", {{"type", "integer"}}},
            {"page", {{"type", "integer"}}},
            {"page_size", {{"type", "integer"}}},
            {"hits", {{"type", "array"}, {"items", {{"type", "object"}}}}}}},
          {"required", {"total", "page", "page_size", "hits"}}};
}

json cursor_prop() { return str_prop("Continuation cursor from an earlier truncated response"); }

std::vector<ToolDescriptor> make_tools() {
  std::vector<ToolDescriptor> t;
  t.push_back({"search_cases", "Search court and tribunal decisions by citation, name, full text, date range or dataset.",
               search_schema("case"), search_output_schema()});
  t.push_back({"search_laws", "Search statutes and regulations by citation, title, full text, date or dataset.",
               search_schema("law"), search_output_schema()});

  json doc_props;
  doc_props["dataset"] = str_prop("Dataset code, e.g. FC");
  doc_props["citation"] = str_prop("Citation in either language");
  doc_props["cursor"] = cursor_prop();
  t.push_back({"get_document", "Fetch one decision or law with all metadata, its license and full text.",
               {{"type", "object"},
                {"properties", doc_props},
                {"required", {"dataset", "citation"}},
                {"additionalProperties", false}},
               {{"type", "object"}}});

  json sec_props = doc_props;
  sec_props["label"] = str_prop("Section label, e.g. 2(1)");
  sec_props["language"] = {{"type", "string"}, {"enum", {"en", "fr"}}, {"description", "Text language, default en"}};
  t.push_back({"get_law_section", "Fetch the text of one section of a law.",
               {{"type", "object"},
                {"properties", sec_props},
                {"required", {"dataset", "citation", "label"}},
                {"additionalProperties", false}},
               {{"type", "object"},
                {"properties",
                 {{"dataset", {{"type", "string"}}},
                  {"citation", {{"type", "string"}}},
                  {"language", {{"type", "string"}}},
                  {"label", {{"type", "string"}}},
                  {"heading", {{"type", {"string", "null"}}}},
                  {"text", {{"type", "string"}}}}},
                {"required", {"dataset", "citation", "language", "label", "text"}}}});

  json cov_props;
  cov_props["kind"] = {{"type", "string"}, {"enum", {"case", "law"}}, {"description", "Restrict to cases or laws"}};
  json cov_out;
  cov_out["type"] = "object";
  cov_out["properties"]["rows"] = {{"type", "array"}};
  cov_out["properties"]["total_documents"] = {{"type", "integer"}};
  cov_out["properties"]["total_tokens"] = {{"type", "integer"}};
  t.push_back({"coverage_stats", "Per-dataset date range, document count and token count.",
               {{"type", "object"}, {"properties", cov_props}, {"additionalProperties", false}}, cov_out});
  return t;
}

bool type_ok(const std::string& type, const json& v) {
  if (type == "string") return v.is_string();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  if (type == "array") return v.is_array();
  if (type == "object") return v.is_object();
  if (type == "null") return v.is_null();
  return false;
}

std::string type_name(const json& t) {
  if (t.is_string()) return t.get<std::string>();
  std::string out;
  for (auto& x : t) out += (out.empty() ? "" : " or ") + x.get<std::string>();
  return out;
}

void check_value(const std::string& field, const json& schema, const json& v, std::vector<std::string>& out) {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) ok = type_ok(t.get<std::string>(), v);
    else
      for (auto& x : t) ok = ok || type_ok(x.get<std::string>(), v);
    if (!ok) {
      out.push_back(field + ": expected " + type_name(t));
      return;
    }
  }
  if (schema.contains("enum") && std::find(schema["enum"].begin(), schema["enum"].end(), v) == schema["enum"].end()) {
    out.push_back(field + ": must be one of " + schema["enum"].dump());
    return;
  }
  if (v.is_array() && schema.contains("items"))
    for (std::size_t i = 0; i < v.size(); ++i) check_value(field + "[" + std::to_string(i) + "]", schema["items"], v[i], out);
}

struct Cursor {
  std::string field;
  std::size_t offset = 0;
};

std::string make_cursor(const std::string& field, std::size_t offset) { return field + "@" + std::to_string(offset); }

Cursor parse_cursor(const std::string& s, const std::vector<std::string>& fields) {
  auto at = s.rfind('@');
  Cursor c;
  if (at != std::string::npos) {
    c.field = s.substr(0, at);
    auto [p, ec] = std::from_chars(s.data() + at + 1, s.data() + s.size(), c.offset);
    if (ec == std::errc() && p == s.data() + s.size() && at + 1 < s.size() &&
        std::find(fields.begin(), fields.end(), c.field) != fields.end())
      return c;
  }
  throw ProtocolError(kInvalidParams, "invalid cursor", json{{"fields", {"cursor: not a cursor issued by this tool"}}});
}

struct Slice {
  std::string text;
  std::size_t total = 0;     // code points in the whole field
  std::size_t end = 0;       // code point offset just past this slice
  bool truncated() const { return end < total; }
};

Slice slice_text(std::string_view s, std::size_t offset, std::size_t limit) {
  Slice out;
  out.total = text::codepoint_count(s);
  offset = std::min(offset, out.total);
  std::string_view rest = s.substr(text::prefix_bytes(s, offset));
  out.text = std::string(rest.substr(0, text::prefix_bytes(rest, limit)));
  out.end = std::min(out.total, offset + limit);
  return out;
}

json truncation_entry(const std::string& field, std::size_t returned_to, std::size_t total) {
  return {{"field", field},
          {"marker", kTruncationMarker},
          {"returned_through", returned_to},
          {"total", total},
          {"cursor", make_cursor(field, returned_to)}};
}

std::string truncation_line(const json& e) {
  return std::string(kTruncationMarker) + " " + e["field"].get<std::string>() + ": " +
         std::to_string(e["returned_through"].get<std::size_t>()) + " of " + std::to_string(e["total"].get<std::size_t>()) +
         " shown; continue with cursor \"" + e["cursor"].get<std::string>() + "\"";
}

// Sections from `first` until adding another would pass the limit. Always at
// least one.
std::pair<json, std::size_t> section_chunk(const std::vector<LawSection>& sections, std::size_t first, std::size_t limit) {
  json arr = json::array();
  std::size_t used = 0, i = first;
  for (; i < sections.size(); ++i) {
    std::size_t n = text::codepoint_count(sections[i].text);
    if (i > first && used + n > limit) break;
    used += n;
    json s;
    s["label"] = sections[i].label;
    s["heading"] = sections[i].heading ? json(*sections[i].heading) : json(nullptr);
    s["text"] = sections[i].text;
    arr.push_back(std::move(s));
  }
  return {arr, i};
}

api::Params to_params(const json& args) {
  api::Params p;
  for (auto& [k, v] : args.items()) {
    if (v.is_string()) p.emplace(k, v.get<std::string>());
    else if (v.is_number_integer()) p.emplace(k, std::to_string(v.get<long long>()));
    else if (v.is_array())
      for (auto& x : v) p.emplace(k, x.get<std::string>());
  }
  return p;
}

ToolResult not_found(const std::string& what) {
  ToolResult r;
  r.structured = {{"error", {{"code", "not_found"}, {"message", what}}}};
  r.text = what;
  r.is_error = true;
  return r;
}

json rpc_error(const json& id, int code, const std::string& message, const json& data = nullptr) {
  json e{{"code", code}, {"message", message}};
  if (!data.is_null()) e["data"] = data;
  return {{"jsonrpc", "2.0"}, {"id", id}, {"error", e}};
}

}  // namespace

json to_json(const ToolDescriptor& t) {
  return {{"name", t.name}, {"description", t.description}, {"inputSchema", t.input_schema}, {"outputSchema", t.output_schema}};
}

json to_json(const ToolResult& r) {
  return {{"content", {{{"type", "text"}, {"text", r.text}}}}, {"structuredContent", r.structured}, {"isError", r.is_error}};
}

std::vector<std::string> schema_violations(const json& schema, const json& args) {
  std::vector<std::string> out;
  if (!args.is_object()) return {"arguments: expected object"};
  const json empty = json::object();
  const json& props = schema.contains("properties") ? schema["properties"] : empty;
  if (schema.contains("required"))
    for (auto& r : schema["required"])
      if (!args.contains(r.get<std::string>())) out.push_back(r.get<std::string>() + ": required");
  for (auto& [k, v] : args.items()) {
    if (!props.contains(k)) {
      if (schema.value("additionalProperties", true) == false) out.push_back(k + ": unexpected");
      continue;
    }
    check_value(k, props[k], v, out);
  }
  return out;
}

Server::Server(IndexSource index, std::shared_ptr<const Tokenizer> tokenizer, std::size_t truncate_limit)
    : index_(std::move(index)), tokenizer_(std::move(tokenizer)), limit_(truncate_limit), tools_(make_tools()) {
  if (!tokenizer_) tokenizer_ = make_tokenizer("word-fallback");
  if (limit_ == 0) throw ConfigError("truncation limit must be positive");
}

ToolResult Server::call_tool(const std::string& name, const json& arguments) const {
  auto it = std::find_if(tools_.begin(), tools_.end(), [&](auto& t) { return t.name == name; });
  if (it == tools_.end()) throw ProtocolError(kInvalidParams, "tool not found: " + name);
  const json args = arguments.is_null() ? json::object() : arguments;
  auto bad = schema_violations(it->input_schema, args);
  if (!bad.empty()) throw ProtocolError(kInvalidParams, "invalid arguments for " + name, json{{"fields", bad}});
  try {
    if (name == "search_cases") return search(DocumentKind::kCase, args);
    if (name == "search_laws") return search(DocumentKind::kLaw, args);
    if (name == "get_document") return get_document(args);
    if (name == "get_law_section") return get_law_section(args);
    return coverage(args);
  } catch (const InvalidQuery& e) {
    throw ProtocolError(kInvalidParams, e.what(), json{{"fields", {e.what()}}});
  }
}

ToolResult Server::search(DocumentKind kind, const json& args) const {
  auto q = api::query_from_params(to_params(args), kind);
  auto idx = index_();
  auto page = idx->search(q);
  ToolResult r;
  r.structured = api::to_json(page);
  std::size_t pages = page.total == 0 ? 0 : (page.total + page.page_size - 1) / page.page_size;
  r.text = std::to_string(page.total) + (kind == DocumentKind::kCase ? " decision" : " law") +
           (page.total == 1 ? "" : "s") + " matched; page " + std::to_string(page.page) + " of " +
           std::to_string(pages) + ".";
  for (auto& h : page.hits) {
    r.text += "\n- " + h.key.citation + " [" + h.key.dataset + "] " + h.name;
    if (h.date) r.text += " (" + h.date->iso() + ")";
  }
  return r;
}

ToolResult Server::get_document(const json& args) const {
  auto idx = index_();
  const std::string dataset = args["dataset"], citation = args["citation"];
  const DocumentRecord* rec = idx->snapshot().find(dataset, normalize_citation(citation));
  if (!rec) return not_found("no document " + dataset + "/" + citation);

  static const std::vector<std::string> fields = {"unofficial_text_en", "unofficial_text_fr", "unofficial_sections_en",
                                                  "unofficial_sections_fr"};
  auto language_of = [](const std::string& f) { return f.back() == 'n' ? Language::kEn : Language::kFr; };
  ToolResult r;
  json truncation = json::array();
  if (args.contains("cursor")) {
    Cursor c = parse_cursor(args["cursor"].get<std::string>(), fields);
    Language l = language_of(c.field);
    json s;
    s["dataset"] = rec->dataset;
    s["citation"] = primary_citation(*rec);
    s["field"] = c.field;
    s["offset"] = c.offset;
    if (c.field.rfind("unofficial_text", 0) == 0) {
      auto slice = slice_text(rec->text(l).value_or(""), c.offset, limit_);
      s["text"] = slice.text;
      r.text = slice.text;
      if (slice.truncated()) truncation.push_back(truncation_entry(c.field, slice.end, slice.total));
    } else {
      const auto& secs = rec->sections(l) ? *rec->sections(l) : std::vector<LawSection>{};
      auto [chunk, next] = section_chunk(secs, std::min(c.offset, secs.size()), limit_);
      s["sections"] = chunk;
      for (auto& x : chunk) r.text += (r.text.empty() ? "" : "\n") + x["label"].get<std::string>() + " " + x["text"].get<std::string>();
      if (next < secs.size()) truncation.push_back(truncation_entry(c.field, next, secs.size()));
    }
    if (!truncation.empty()) s["truncation"] = truncation;
    r.structured = std::move(s);
  } else {
    json s = record_to_json(*rec);
    for (Language l : kLanguages) {
      std::string tf = l == Language::kEn ? "unofficial_text_en" : "unofficial_text_fr";
      if (rec->text(l)) {
        auto slice = slice_text(*rec->text(l), 0, limit_);
        if (slice.truncated()) {
          s[tf] = slice.text;
          truncation.push_back(truncation_entry(tf, slice.end, slice.total));
        }
      }
      std::string sf = l == Language::kEn ? "unofficial_sections_en" : "unofficial_sections_fr";
      if (rec->kind == DocumentKind::kLaw && rec->sections(l)) {
        auto [chunk, next] = section_chunk(*rec->sections(l), 0, limit_);
        if (next < rec->sections(l)->size()) {
          s[sf] = chunk;
          truncation.push_back(truncation_entry(sf, next, rec->sections(l)->size()));
        }
      }
    }
    if (!truncation.empty()) s["truncation"] = truncation;
    r.text = primary_citation(*rec) + " | " + primary_name(*rec) + " | " + rec->dataset;
    if (auto d = primary_date(*rec)) r.text += " | " + d->iso();
    r.text += "\nLicense: " + rec->upstream_license;
    for (const char* tf : {"unofficial_text_en", "unofficial_text_fr"})
      if (s.contains(tf) && s[tf].is_string() && !s[tf].get<std::string>().empty()) {
        r.text += "\n\n" + s[tf].get<std::string>();
        break;
      }
    r.structured = std::move(s);
  }
  for (auto& e : truncation) r.text += "\n" + truncation_line(e);
  return r;
}

ToolResult Server::get_law_section(const json& args) const {
  auto idx = index_();
  const std::string dataset = args["dataset"], citation = args["citation"], label = args["label"];
  const std::string lang = args.value("language", "en");
  Language l = *parse_language(lang);
  const DocumentRecord* rec = idx->snapshot().find(dataset, normalize_citation(citation));
  if (!rec || rec->kind != DocumentKind::kLaw) return not_found("no law " + dataset + "/" + citation);
  const LawSection* sec = nullptr;
  if (rec->sections(l))
    for (auto& s : *rec->sections(l))
      if (s.label == label) {
        sec = &s;
        break;
      }
  if (!sec) return not_found("no section " + label + " (" + lang + ") in " + primary_citation(*rec));

  std::size_t offset = 0;
  if (args.contains("cursor")) offset = parse_cursor(args["cursor"].get<std::string>(), {"text"}).offset;
  auto slice = slice_text(sec->text, offset, limit_);
  ToolResult r;
  json s;
  s["dataset"] = rec->dataset;
  s["citation"] = primary_citation(*rec);
  s["language"] = lang;
  s["label"] = sec->label;
  s["heading"] = sec->heading ? json(*sec->heading) : json(nullptr);
  s["text"] = slice.text;
  r.text = (sec->heading ? *sec->heading + "\n" : std::string()) + sec->label + " " + slice.text;
  if (slice.truncated()) {
    json e = truncation_entry("text", slice.end, slice.total);
    s["truncation"] = json::array({e});
    r.text += "\n" + truncation_line(e);
  }
  r.structured = std::move(s);
  return r;
}

ToolResult Server::coverage(const json& args) const {
  std::optional<DocumentKind> kind;
  if (args.contains("kind")) kind = parse_kind(args["kind"].get<std::string>());
  auto idx = index_();
  auto table = coverage_stats(idx->snapshot(), *tokenizer_, kind);
  return {api::to_json(table), coverage_tsv(table)};
}

std::optional<json> Server::handle_message(const json& msg) const {
  if (!msg.is_object()) return rpc_error(nullptr, kInvalidRequest, "request must be an object");
  const bool notification = !msg.contains("id");
  const json id = notification ? json(nullptr) : msg["id"];
  if (!id.is_null() && !id.is_string() && !id.is_number_integer())
    return rpc_error(nullptr, kInvalidRequest, "id must be a string or integer");
  if (msg.value("jsonrpc", "") != "2.0" || !msg.contains("method") || !msg["method"].is_string()) {
    if (notification) return std::nullopt;
    return rpc_error(id, kInvalidRequest, "not a JSON-RPC 2.0 request");
  }
  const std::string method = msg["method"];
  const json params = msg.contains("params") ? msg["params"] : json::object();
  if (notification) return std::nullopt;

  auto ok = [&](json result) { return json{{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}}; };
  try {
    if (method == "initialize") {
      std::string version = kProtocolVersion;
      if (params.is_object() && params.contains("protocolVersion") && params["protocolVersion"].is_string())
        version = params["protocolVersion"];
      return ok({{"protocolVersion", version},
                 {"capabilities", {{"tools", {{"listChanged", false}}}}},
                 {"serverInfo", {{"name", "openlex"}, {"version", "1.0.0"}}}});
    }
    if (method == "ping") return ok(json::object());
    if (method == "tools/list") {
      json arr = json::array();
      for (auto& t : tools_) arr.push_back(to_json(t));
      return ok({{"tools", arr}});
    }
    if (method == "tools/call") {
      if (!params.is_object() || !params.contains("name") || !params["name"].is_string())
        return rpc_error(id, kInvalidParams, "tools/call needs a tool name");
      return ok(to_json(call_tool(params["name"], params.value("arguments", json::object()))));
    }
    return rpc_error(id, kMethodNotFound, "method not found: " + method);
  } catch (const ProtocolError& e) {
    return rpc_error(id, e.code(), e.what(), e.data());
  } catch (const std::exception& e) {
    return rpc_error(id, kInternalError, e.what());
  }
}

std::string Server::handle_text(const std::string& text) const {
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::parse_error& e) {
    return rpc_error(nullptr, kParseError, e.what()).dump();
  }
  auto reply = handle_message(msg);
  return reply ? reply->dump() : std::string();
}

void Server::serve_stdio(std::istream& in, std::ostream& out) const {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto reply = handle_text(line);
    if (!reply.empty()) out << reply << '\n' << std::flush;
  }
}

}  // namespace openlex::mcp
