#include <regex>

#include "openlex/ingest/ingest.hpp"
#include "openlex/markup/dom.hpp"
#include "openlex/markup/selector.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::ingest {

namespace {

std::optional<std::string> cell(const markup::Node& row, const CellRule& rule) {
  if (rule.empty()) return std::nullopt;
  const markup::Node* n = rule.selector.empty() ? &row : markup::select_first(row, rule.selector);
  if (!n) return std::nullopt;
  std::string v;
  if (rule.attribute.empty()) {
    v = text::collapse_whitespace(n->text_content());
  } else if (auto* a = n->attribute(rule.attribute)) {
    v = text::collapse_whitespace(*a);
  }
  if (v.empty()) return std::nullopt;
  return v;
}

}  // namespace


std::string find_citation(std::string_view text, const std::string& pattern) {
  if (pattern.empty()) return {};
  std::regex re;
  try {
    re.assign(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw ConfigError("bad citation_pattern: " + std::string(e.what()));
  }
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(text.begin(), text.end(), m, re)) return {};
  return text::collapse_whitespace(m.str(0));
}

ListingResult parse_listing(std::string_view page, const SourceDescriptor& source) {
  const auto& sel = source.selectors;
  if (sel.row.empty() || sel.link.empty()) throw ConfigError(source.dataset + ": listing needs row and link selectors");
  CellRule link = sel.link;
  if (link.attribute.empty()) link.attribute = "href";

  auto doc = markup::parse(page, markup::Mode::kHtml);
  ListingResult out;
  std::size_t row_no = 0;
  for (const markup::Node* row : markup::select(doc.root, sel.row)) {
    ++row_no;
    std::string item = "row " + std::to_string(row_no);
    auto skip = [&](std::string code, std::string msg) { out.skipped.push_back({item, std::move(code), std::move(msg)}); };

    auto raw_citation = cell(*row, sel.citation);
    std::string citation;
    if (raw_citation) {
      citation = find_citation(*raw_citation, sel.citation_pattern);
      if (citation.empty()) citation = *raw_citation;
    }
    auto href = cell(*row, link);
    if (citation.empty()) {
      skip("missing_citation", "row has no citation cell");
      continue;
    }
    if (!href) {
      skip("missing_link", "row has no link");
      continue;
    }
    DocumentStub stub;
    stub.dataset = source.dataset;
    stub.citation = citation;
    stub.url = source.listing_url.empty() ? *href : resolve_url(source.listing_url, *href);
    stub.language = source.language;
    if (auto name = cell(*row, sel.name)) stub.name = *name;
    if (auto d = cell(*row, sel.date)) {
      stub.date = parse_date(*d, sel.date_format);
      if (!stub.date) {
        skip("bad_date", "date \"" + *d + "\" does not parse as " + sel.date_format);
        continue;
      }
    }
    out.stubs.push_back(std::move(stub));
  }
  return out;
}

}  // namespace openlex::ingest
