#include "openlex/ingest/ingest.hpp"
#include "openlex/markup/dom.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::ingest {

namespace {

using markup::Node;

const Node* find_child(const Node& n, std::string_view name) {
  for (auto* c : n.element_children())
    if (c->name == name) return c;
  return nullptr;
}

std::string child_text(const Node* n, std::string_view name) {
  if (!n) return {};
  const Node* c = find_child(*n, name);
  return c ? text::collapse_whitespace(c->text_content()) : std::string();
}

bool skipped_element(std::string_view name) {
  return name == "Label" || name == "MarginalNote" || name == "HistoricalNote" || name == "Footnote";
}

bool text_element(std::string_view name) {
  return name == "Text" || name.rfind("Continued", 0) == 0;
}

// One line per labelled provision: "(1) text", nested provisions on their own lines.
void flatten(const Node& n, std::vector<std::string>& lines, bool own_label) {
  std::string label = own_label ? child_text(&n, "Label") : std::string();
  bool labelled = false;
  for (auto* c : n.element_children()) {
    if (skipped_element(c->name)) continue;
    if (text_element(c->name)) {
      std::string t = text::collapse_whitespace(c->text_content());
      if (t.empty()) continue;
      if (!label.empty() && !labelled) {
        t = label + " " + t;
        labelled = true;
      }
      lines.push_back(std::move(t));
    } else {
      flatten(*c, lines, true);
    }
  }
}

std::optional<Date> attribute_date(const Node& root, std::string_view local) {
  for (auto& [k, v] : root.attributes) {
    auto colon = k.find(':');
    std::string_view name = colon == std::string::npos ? std::string_view(k) : std::string_view(k).substr(colon + 1);
    if (name == local) return Date::from_iso(v);
  }
  return std::nullopt;
}

void collect_sections(const Node& n, std::vector<const Node*>& out) {
  for (auto* c : n.element_children()) {
    if (c->name == "Section") {
      out.push_back(c);
    } else if (c->name == "Heading" || c->name == "Part" || c->name == "Division" || c->name == "Body" ||
               c->name == "Group") {
      collect_sections(*c, out);
    }
  }
}

}  // namespace

LawParse parse_law_xml(std::string_view xml, const SourceDescriptor& source, std::string url,
                       std::optional<Timestamp> fetched_at) {
  auto doc = markup::parse(xml, markup::Mode::kXml);
  const Node& root = *doc.document_element();
  if (root.name != "Statute" && root.name != "Regulation")
    throw ParseError("expected <Statute> or <Regulation>, found <" + root.name + ">", root.offset);

  LawParse out;
  Language lang = source.language;
  if (auto* l = root.attribute("xml:lang")) lang = parse_language(*l).value_or(lang);

  const Node* ident = find_child(root, "Identification");
  std::string citation = child_text(ident, "InstrumentNumber");
  if (citation.empty() && ident) citation = child_text(find_child(*ident, "Chapter"), "ConsolidatedNumber");
  if (citation.empty()) out.warnings.push_back("no instrument or consolidated number");
  std::string name = child_text(ident, "ShortTitle");
  if (name.empty()) name = child_text(ident, "LongTitle");

  DocumentRecord& r = out.record;
  r.dataset = source.dataset;
  r.kind = DocumentKind::kLaw;
  if (!citation.empty()) r.citation(lang) = citation;
  if (!name.empty()) r.name(lang) = name;
  r.document_date(lang) = attribute_date(root, "current-date");
  if (!r.document_date(lang)) r.document_date(lang) = attribute_date(root, "lastAmendedDate");
  if (!url.empty()) r.url(lang) = std::move(url);
  if (fetched_at) r.scraped_timestamp(lang) = *fetched_at;
  r.upstream_license = source.license_text;

  std::vector<const Node*> section_nodes;
  if (const Node* body = find_child(root, "Body")) collect_sections(*body, section_nodes);

  std::vector<LawSection> sections;
  std::string full;
  for (const Node* s : section_nodes) {
    std::vector<std::string> lines;
    flatten(*s, lines, false);
    LawSection sec;
    sec.label = child_text(s, "Label");
    if (auto note = child_text(s, "MarginalNote"); !note.empty()) sec.heading = note;
    for (std::size_t i = 0; i < lines.size(); ++i) sec.text += (i ? "\n" : "") + lines[i];
    if (sec.label.empty()) {
      out.warnings.push_back("section without a label at byte " + std::to_string(s->offset));
      continue;
    }
    if (!full.empty()) full += "\n";
    full += sec.label + " " + sec.text;
    sections.push_back(std::move(sec));
  }
  if (sections.empty()) {
    out.warnings.push_back("no extractable sections");
    if (const Node* body = find_child(root, "Body")) full = markup::block_text(*body);
  }
  r.text(lang) = full;
  r.sections(lang) = std::move(sections);
  return out;
}

}  // namespace openlex::ingest
