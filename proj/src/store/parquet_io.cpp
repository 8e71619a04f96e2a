#include "openlex/store/parquet_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "openlex/error.hpp"
#include "openlex/store/coverage.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex {

namespace fs = std::filesystem;
namespace pq = parquet;

namespace {

enum class FieldType { kPlain, kString, kDate, kTimestamp, kSections };

struct Field {
  const char* name;
  FieldType type;
  std::string DocumentRecord::*plain = nullptr;
  std::optional<std::string> DocumentRecord::*str = nullptr;
  std::optional<Date> DocumentRecord::*date = nullptr;
  std::optional<Timestamp> DocumentRecord::*ts = nullptr;
  std::optional<std::vector<LawSection>> DocumentRecord::*sections = nullptr;
};

using R = DocumentRecord;

const std::vector<Field>& fields_for(DocumentKind kind) {
  static const std::vector<Field> head = {
      {"dataset", FieldType::kPlain, &R::dataset},
      {"citation_en", FieldType::kString, nullptr, &R::citation_en},
      {"citation_fr", FieldType::kString, nullptr, &R::citation_fr},
      {"citation2_en", FieldType::kString, nullptr, &R::citation2_en},
      {"citation2_fr", FieldType::kString, nullptr, &R::citation2_fr},
      {"name_en", FieldType::kString, nullptr, &R::name_en},
      {"name_fr", FieldType::kString, nullptr, &R::name_fr},
      {"document_date_en", FieldType::kDate, nullptr, nullptr, &R::document_date_en},
      {"document_date_fr", FieldType::kDate, nullptr, nullptr, &R::document_date_fr},
      {"url_en", FieldType::kString, nullptr, &R::url_en},
      {"url_fr", FieldType::kString, nullptr, &R::url_fr},
      {"scraped_timestamp_en", FieldType::kTimestamp, nullptr, nullptr, nullptr, &R::scraped_timestamp_en},
      {"scraped_timestamp_fr", FieldType::kTimestamp, nullptr, nullptr, nullptr, &R::scraped_timestamp_fr},
      {"unofficial_text_en", FieldType::kString, nullptr, &R::unofficial_text_en},
      {"unofficial_text_fr", FieldType::kString, nullptr, &R::unofficial_text_fr},
  };
  static const Field license = {"upstream_license", FieldType::kPlain, &R::upstream_license};
  static const std::vector<Field> cases = [] {
    auto v = head;
    v.push_back(license);
    return v;
  }();
  static const std::vector<Field> laws = [] {
    auto v = head;
    v.push_back({"unofficial_sections_en", FieldType::kSections, nullptr, nullptr, nullptr, nullptr,
                 &R::unofficial_sections_en});
    v.push_back({"unofficial_sections_fr", FieldType::kSections, nullptr, nullptr, nullptr, nullptr,
                 &R::unofficial_sections_fr});
    v.push_back(license);
    return v;
  }();
  return kind == DocumentKind::kLaw ? laws : cases;
}

pq::SchemaNode schema_for(const Field& f) {
  using pq::Logical;
  using pq::PhysicalType;
  using pq::Repetition;
  using pq::SchemaNode;
  switch (f.type) {
    case FieldType::kPlain:
    case FieldType::kString:
      return SchemaNode::leaf(f.name, PhysicalType::kByteArray, Repetition::kOptional, Logical::kString);
    case FieldType::kDate:
      return SchemaNode::leaf(f.name, PhysicalType::kInt32, Repetition::kOptional, Logical::kDate);
    case FieldType::kTimestamp:
      return SchemaNode::leaf(f.name, PhysicalType::kInt64, Repetition::kOptional, Logical::kTimestampMicros);
    case FieldType::kSections:
      return SchemaNode::group(
          f.name, Repetition::kOptional,
          {SchemaNode::group(
              "list", Repetition::kRepeated,
              {SchemaNode::group(
                  "element", Repetition::kRequired,
                  {SchemaNode::leaf("label", PhysicalType::kByteArray, Repetition::kRequired, Logical::kString),
                   SchemaNode::leaf("heading", PhysicalType::kByteArray, Repetition::kOptional, Logical::kString),
                   SchemaNode::leaf("text", PhysicalType::kByteArray, Repetition::kRequired, Logical::kString)})})},
          Logical::kList);
  }
  return {};
}

constexpr std::int64_t kMicros = 1'000'000;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void shred_sections(const std::vector<const DocumentRecord*>& records, const Field& f,
                    pq::ColumnData& label, pq::ColumnData& heading, pq::ColumnData& text) {
  auto& lv = label.values.emplace<std::vector<std::string>>();
  auto& hv = heading.values.emplace<std::vector<std::string>>();
  auto& tv = text.values.emplace<std::vector<std::string>>();
  auto push_levels = [&](std::int16_t rep, std::int16_t def, std::int16_t heading_def) {
    label.rep_levels.push_back(rep);
    heading.rep_levels.push_back(rep);
    text.rep_levels.push_back(rep);
    label.def_levels.push_back(def);
    heading.def_levels.push_back(heading_def);
    text.def_levels.push_back(def);
  };
  for (auto* r : records) {
    const auto& secs = r->*f.sections;
    if (!secs) {
      push_levels(0, 0, 0);
      continue;
    }
    if (secs->empty()) {
      push_levels(0, 1, 1);
      continue;
    }
    for (std::size_t k = 0; k < secs->size(); ++k) {
      const LawSection& s = (*secs)[k];
      push_levels(k == 0 ? 0 : 1, 2, s.heading ? 3 : 2);
      lv.push_back(s.label);
      if (s.heading) hv.push_back(*s.heading);
      tv.push_back(s.text);
    }
  }
}

// Index into `values` for each row, or nullopt when the row is null.
std::vector<std::optional<std::size_t>> flat_presence(const pq::LeafColumn& c, std::int64_t rows) {
  std::vector<std::optional<std::size_t>> out(static_cast<std::size_t>(rows));
  if (c.max_def == 0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  if (c.data.def_levels.size() != out.size())
    throw ParseError("column " + c.dotted_path() + " has " + std::to_string(c.data.def_levels.size()) +
                         " levels for " + std::to_string(rows) + " rows",
                     0);
  std::size_t v = 0;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (c.data.def_levels[i] == c.max_def) out[i] = v++;
  return out;
}

bool is_string_leaf(const pq::LeafColumn& c) { return c.type == pq::PhysicalType::kByteArray; }

bool compatible(const Field& f, const std::vector<const pq::LeafColumn*>& leaves) {
  if (f.type == FieldType::kSections) {
    bool label = false, text = false;
    for (auto* c : leaves) {
      if (c->max_rep != 1 || !is_string_leaf(*c)) return false;
      if (c->path.back() == "label") label = true;
      if (c->path.back() == "text") text = true;
    }
    return label && text;
  }
  if (leaves.size() != 1 || leaves[0]->path.size() != 1 || leaves[0]->max_rep != 0) return false;
  auto t = leaves[0]->type;
  switch (f.type) {
    case FieldType::kPlain:
    case FieldType::kString:
      return t == pq::PhysicalType::kByteArray;
    case FieldType::kDate:
      return t == pq::PhysicalType::kInt32 || t == pq::PhysicalType::kByteArray;
    case FieldType::kTimestamp:
      return t == pq::PhysicalType::kInt64 || t == pq::PhysicalType::kInt96 ||
             t == pq::PhysicalType::kByteArray;
    case FieldType::kSections:
      break;
  }
  return false;
}

std::int64_t units_per_second(const pq::LeafColumn& c) {
  if (c.type == pq::PhysicalType::kInt96) return 1'000'000'000;
  switch (c.logical) {
    case pq::Logical::kTimestampMillis: return 1'000;
    case pq::Logical::kTimestampNanos: return 1'000'000'000;
    default: return kMicros;
  }
}

using RowIssues = std::vector<std::vector<Violation>>;

void read_flat(const Field& f, const pq::LeafColumn& c, std::vector<DocumentRecord>& out, RowIssues& issues) {
  auto present = flat_presence(c, static_cast<std::int64_t>(out.size()));
  auto bad = [&](std::size_t row, const std::string& what) {
    issues[row].push_back({"bad_value", std::string(f.name) + ": " + what});
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!present[i]) continue;
    std::size_t v = *present[i];
    DocumentRecord& r = out[i];
    switch (f.type) {
      case FieldType::kPlain:
        r.*f.plain = std::get<std::vector<std::string>>(c.data.values)[v];
        break;
      case FieldType::kString:
        r.*f.str = std::get<std::vector<std::string>>(c.data.values)[v];
        break;
      case FieldType::kDate:
        if (c.type == pq::PhysicalType::kInt32) {
          r.*f.date = Date::from_days(std::get<std::vector<std::int32_t>>(c.data.values)[v]);
        } else {
          const auto& s = std::get<std::vector<std::string>>(c.data.values)[v];
          if (auto d = Date::from_iso(s))
            r.*f.date = d;
          else
            bad(i, "not an ISO date: " + s);
        }
        break;
      case FieldType::kTimestamp:
        if (c.type == pq::PhysicalType::kByteArray) {
          const auto& s = std::get<std::vector<std::string>>(c.data.values)[v];
          if (auto t = parse_timestamp(s))
            r.*f.ts = t;
          else
            bad(i, "not a UTC timestamp: " + s);
        } else {
          std::int64_t raw = std::get<std::vector<std::int64_t>>(c.data.values)[v];
          r.*f.ts = Timestamp{std::chrono::seconds{floor_div(raw, units_per_second(c))}};
        }
        break;
      case FieldType::kSections:
        break;
    }
  }
}

void read_sections(const Field& f, const std::vector<const pq::LeafColumn*>& leaves,
                   std::vector<DocumentRecord>& out) {
  const pq::LeafColumn *label = nullptr, *heading = nullptr, *text = nullptr;
  for (auto* c : leaves) {
    const auto& n = c->path.back();
    if (n == "label") label = c;
    if (n == "heading") heading = c;
    if (n == "text") text = c;
  }
  const std::size_t slots = label->data.def_levels.size();
  if (text->data.def_levels.size() != slots || label->data.rep_levels.size() != slots ||
      (heading && heading->data.def_levels.size() != slots))
    throw ParseError(std::string("section columns of ") + f.name + " disagree on their level counts", 0);

  const std::int16_t list_def = label->def_level_at(1);
  const std::int16_t elem_def = label->def_level_at(2);
  const auto& lv = std::get<std::vector<std::string>>(label->data.values);
  const auto& tv = std::get<std::vector<std::string>>(text->data.values);
  const std::vector<std::string>* hv = heading ? &std::get<std::vector<std::string>>(heading->data.values) : nullptr;
  std::size_t li = 0, ti = 0, hi = 0;
  std::int64_t row = -1;
  for (std::size_t s = 0; s < slots; ++s) {
    if (label->data.rep_levels[s] == 0) ++row;
    if (row < 0 || static_cast<std::size_t>(row) >= out.size())
      throw ParseError(std::string("section column ") + f.name + " has more rows than the table", 0);
    auto& secs = out[static_cast<std::size_t>(row)].*f.sections;
    const std::int16_t d = label->data.def_levels[s];
    if (d < list_def) continue;
    if (!secs) secs.emplace();
    if (d < elem_def) continue;
    LawSection sec;
    if (d == label->max_def) sec.label = lv.at(li++);
    if (text->data.def_levels[s] == text->max_def) sec.text = tv.at(ti++);
    if (heading && heading->data.def_levels[s] == heading->max_def) sec.heading = hv->at(hi++);
    secs->push_back(std::move(sec));
  }
}

std::vector<DocumentRecord> reassemble(const pq::Table& table, DocumentKind kind, RowIssues& issues) {
  std::map<std::string, std::vector<const pq::LeafColumn*>> by_top;
  for (auto& c : table.columns) by_top[c.path.front()].push_back(&c);
  std::vector<std::string> missing, incompatible;
  for (auto& f : fields_for(kind)) {
    auto it = by_top.find(f.name);
    if (it == by_top.end())
      missing.push_back(f.name);
    else if (!compatible(f, it->second))
      incompatible.push_back(f.name);
  }
  if (!missing.empty()) {
    std::string msg = "missing required columns:";
    for (auto& m : missing) msg += " " + m;
    throw SchemaError(msg, missing);
  }
  if (!incompatible.empty()) {
    std::string msg = "columns with an incompatible type:";
    for (auto& m : incompatible) msg += " " + m;
    throw SchemaError(msg, incompatible);
  }

  std::vector<DocumentRecord> out(static_cast<std::size_t>(table.num_rows));
  issues.assign(out.size(), {});
  for (auto& r : out) r.kind = kind;
  for (auto& f : fields_for(kind)) {
    const auto& leaves = by_top.at(f.name);
    if (f.type == FieldType::kSections)
      read_sections(f, leaves, out);
    else
      read_flat(f, *leaves.front(), out, issues);
  }
  return out;
}

std::string license_cell(const std::string& s) {
  std::string c = text::collapse_whitespace(s);
  std::string out;
  for (char ch : c) {
    if (ch == '|') out += "\\|";
    else out += ch;
  }
  return out;
}

std::string yaml_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string render_card(const CorpusSnapshot& snap, const Tokenizer& tokenizer, std::size_t n_cases,
                        std::size_t n_laws) {
  auto cases = coverage_stats(snap, tokenizer, DocumentKind::kCase);
  auto laws = coverage_stats(snap, tokenizer, DocumentKind::kLaw);
  std::optional<Date> earliest, latest;
  std::map<std::string, std::size_t> licenses;
  for (auto& r : snap.records()) {
    if (auto d = primary_date(*r)) {
      if (!earliest || *d < *earliest) earliest = d;
      if (!latest || *d > *latest) latest = d;
    }
    ++licenses[text::collapse_whitespace(r->upstream_license)];
  }

  std::ostringstream o;
  o << "---\n";
  o << "license: other\n";
  o << "language:\n- en\n- fr\n";
  o << "configs:\n";
  o << "- config_name: cases\n  data_files:\n  - split: train\n    path: cases/*.parquet\n";
  o << "- config_name: laws\n  data_files:\n  - split: train\n    path: laws/*.parquet\n";
  o << "snapshot_version: " << snap.version() << "\n";
  o << "document_count: " << snap.size() << "\n";
  o << "case_count: " << n_cases << "\n";
  o << "law_count: " << n_laws << "\n";
  o << "earliest_date: " << (earliest ? earliest->iso() : std::string("null")) << "\n";
  o << "latest_date: " << (latest ? latest->iso() : std::string("null")) << "\n";
  o << "tokenizer: " << yaml_quote(tokenizer.name()) << "\n";
  o << "---\n\n";
  o << "# Legal corpus export\n\n";
  o << "Bilingual court decisions (`cases`) and legislation (`laws`). Column names are the "
       "document field names; `_en` and `_fr` suffixes mark the language.\n\n";
  o << "Snapshot version " << snap.version() << ": " << snap.size() << " documents (" << n_cases
    << " cases, " << n_laws << " laws)";
  if (earliest) o << ", dated " << earliest->iso() << " to " << latest->iso();
  o << ".\n\n";
  auto table = [&](const char* title, const CoverageTable& t) {
    o << "## " << title << "\n\n";
    o << "| Dataset | Earliest | Latest | Documents | Tokens |\n";
    o << "|---|---|---|---:|---:|\n";
    for (auto& r : t.rows)
      o << "| " << r.dataset << " | " << (r.earliest ? r.earliest->iso() : "") << " | "
        << (r.latest ? r.latest->iso() : "") << " | " << r.documents << " | " << r.tokens << " |\n";
    o << "| Total | | | " << t.total_documents << " | " << t.total_tokens << " |\n\n";
  };
  table("Cases coverage", cases);
  table("Laws coverage", laws);
  o << "Token counts use the `" << tokenizer.name() << "` tokenizer over both languages' full text.\n\n";
  o << "## Licenses\n\n";
  o << "Each row carries its source's terms in `upstream_license`; they apply to that row.\n\n";
  o << "| Upstream license | Documents |\n|---|---:|\n";
  for (auto& [lic, n] : licenses) o << "| " << license_cell(lic) << " | " << n << " |\n";
  return o.str();
}

ExportedFile write_table(const fs::path& out_dir, const std::string& rel, const pq::Table& t) {
  fs::path p = out_dir / rel;
  pq::write_file(p, t);
  std::error_code ec;
  auto bytes = fs::file_size(p, ec);
  return {rel, t.num_rows, ec ? 0 : bytes};
}

}  // namespace

const std::vector<std::string>& case_columns() {
  static const std::vector<std::string> v = [] {
    std::vector<std::string> n;
    for (auto& f : fields_for(DocumentKind::kCase)) n.emplace_back(f.name);
    return n;
  }();
  return v;
}

const std::vector<std::string>& law_columns() {
  static const std::vector<std::string> v = [] {
    std::vector<std::string> n;
    for (auto& f : fields_for(DocumentKind::kLaw)) n.emplace_back(f.name);
    return n;
  }();
  return v;
}

std::vector<pq::SchemaNode> corpus_schema(DocumentKind kind) {
  std::vector<pq::SchemaNode> out;
  for (auto& f : fields_for(kind)) out.push_back(schema_for(f));
  return out;
}

pq::Table records_to_table(const std::vector<const DocumentRecord*>& records, DocumentKind kind) {
  pq::Table t;
  t.fields = corpus_schema(kind);
  t.num_rows = static_cast<std::int64_t>(records.size());
  t.columns = pq::leaf_layout(t.fields);
  std::size_t col = 0;
  for (auto& f : fields_for(kind)) {
    if (f.type == FieldType::kSections) {
      shred_sections(records, f, t.columns[col].data, t.columns[col + 1].data, t.columns[col + 2].data);
      col += 3;
      continue;
    }
    pq::ColumnData& d = t.columns[col++].data;
    auto def = [&](bool present) { d.def_levels.push_back(present ? 1 : 0); };
    switch (f.type) {
      case FieldType::kPlain: {
        auto& v = d.values.emplace<std::vector<std::string>>();
        for (auto* r : records) {
          def(true);
          v.push_back(r->*f.plain);
        }
        break;
      }
      case FieldType::kString: {
        auto& v = d.values.emplace<std::vector<std::string>>();
        for (auto* r : records) {
          def(bool(r->*f.str));
          if (r->*f.str) v.push_back(*(r->*f.str));
        }
        break;
      }
      case FieldType::kDate: {
        auto& v = d.values.emplace<std::vector<std::int32_t>>();
        for (auto* r : records) {
          def(bool(r->*f.date));
          if (r->*f.date) v.push_back((r->*f.date)->days_since_epoch());
        }
        break;
      }
      case FieldType::kTimestamp: {
        auto& v = d.values.emplace<std::vector<std::int64_t>>();
        for (auto* r : records) {
          def(bool(r->*f.ts));
          if (r->*f.ts) v.push_back((r->*f.ts)->time_since_epoch().count() * kMicros);
        }
        break;
      }
      case FieldType::kSections:
        break;
    }
  }
  return t;
}

std::vector<DocumentRecord> table_to_records(const pq::Table& table, DocumentKind kind) {
  RowIssues issues;
  return reassemble(table, kind, issues);
}

ExportManifest export_parquet(const CorpusSnapshot& snap, const fs::path& out_dir, const Tokenizer& tokenizer) {
  std::error_code ec;
  fs::create_directories(out_dir / "cases", ec);
  if (!ec) fs::create_directories(out_dir / "laws", ec);
  if (ec) throw IoError("cannot create export directory " + out_dir.string() + ": " + ec.message());

  std::vector<const DocumentRecord*> cases, laws;
  for (auto& r : snap.records()) (r->kind == DocumentKind::kLaw ? laws : cases).push_back(r.get());

  ExportManifest m;
  m.dir = out_dir;
  m.snapshot_version = snap.version();
  for (auto [kind, recs, rel] : {std::tuple{DocumentKind::kCase, &cases, "cases/cases-00000.parquet"},
                                 std::tuple{DocumentKind::kLaw, &laws, "laws/laws-00000.parquet"}}) {
    pq::Table t = records_to_table(*recs, kind);
    t.metadata = {{"openlex.snapshot_version", std::to_string(snap.version())},
                  {"openlex.kind", kind == DocumentKind::kLaw ? "laws" : "cases"}};
    m.files.push_back(write_table(out_dir, rel, t));
  }

  std::string card = render_card(snap, tokenizer, cases.size(), laws.size());
  fs::path card_path = out_dir / "README.md";
  std::ofstream out(card_path, std::ios::binary | std::ios::trunc);
  out << card;
  out.flush();
  if (!out) throw IoError("cannot write " + card_path.string());
  m.files.push_back({"README.md", 0, card.size()});
  return m;
}

LoadResult load_parquet(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  LoadResult result;
  std::vector<DocumentRecord> accepted;
  std::set<std::pair<std::string, std::string>> seen;
  std::uint64_t version = 0;
  bool any = false;
  for (auto [kind, sub] : {std::pair{DocumentKind::kCase, "cases"}, std::pair{DocumentKind::kLaw, "laws"}}) {
    fs::path d = dir / sub;
    if (!fs::is_directory(d)) continue;
    std::vector<fs::path> files;
    for (auto& e : fs::directory_iterator(d))
      if (e.is_regular_file() && e.path().extension() == ".parquet") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (auto& p : files) {
      any = true;
      std::string rel = std::string(sub) + "/" + p.filename().string();
      pq::Table t = pq::read_file(p);
      for (auto& [k, v] : t.metadata)
        if (k == "openlex.snapshot_version") version = std::max<std::uint64_t>(version, std::stoull(v));
      RowIssues issues;
      auto rows = reassemble(t, kind, issues);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        DocumentRecord& r = rows[i];
        auto check = validate_record(r);
        auto& v = issues[i];
        v.insert(v.end(), check.violations.begin(), check.violations.end());
        if (v.empty()) {
          for (Language l : kLanguages) {
            if (!r.citation(l)) continue;
            std::string c = normalize_citation(*r.citation(l));
            if (!c.empty() && seen.count({r.dataset, c}))
              v.push_back({"duplicate_key", r.dataset + "/" + c + ": citation used by an earlier row"});
          }
        }
        if (!v.empty()) {
          result.rejected.push_back({rel, static_cast<std::int64_t>(i), record_key(r).str(), std::move(v)});
          continue;
        }
        for (Language l : kLanguages)
          if (r.citation(l)) {
            std::string c = normalize_citation(*r.citation(l));
            if (!c.empty()) seen.insert({r.dataset, c});
          }
        accepted.push_back(std::move(r));
      }
    }
  }
  if (!any) throw IoError("no cases/*.parquet or laws/*.parquet files under " + dir.string());
  result.snapshot = CorpusSnapshot::make(std::move(accepted), version);
  return result;
}

}  // namespace openlex
