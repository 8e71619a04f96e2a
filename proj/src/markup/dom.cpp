#include <algorithm>
#include <array>

#include "openlex/markup/dom.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::markup {

namespace {

constexpr std::array<std::string_view, 30> kBlockElements = {
    "address", "article", "aside", "blockquote", "br", "dd", "div", "dl", "dt", "footer",
    "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main",
    "nav", "ol", "p", "pre", "section", "table", "tr", "ul", "td", "th"};

bool is_block(std::string_view n) {
  return std::find(kBlockElements.begin(), kBlockElements.end(), n) != kBlockElements.end();
}

void collect_text(const Node& n, std::string& out) {
  if (n.type == Node::Type::kText) {
    out += n.text;
    return;
  }
  for (auto& c : n.children) collect_text(*c, out);
}

void collect_blocks(const Node& n, std::string& out) {
  if (n.type == Node::Type::kText) {
    for (char c : n.text) out.push_back(c == '\n' || c == '\r' ? ' ' : c);
    return;
  }
  bool block = n.is_element() && is_block(n.name);
  if (block) out.push_back('\n');
  for (auto& c : n.children) collect_blocks(*c, out);
  if (block) out.push_back('\n');
}

}  // namespace

const std::string* Node::attribute(std::string_view key) const {
  for (auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

bool Node::has_class(std::string_view cls) const {
  const std::string* c = attribute("class");
  if (!c) return false;
  std::string_view s = *c;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !text::is_space(s[j])) ++j;
    if (s.substr(i, j - i) == cls) return true;
    i = j;
  }
  return false;
}

std::vector<const Node*> Node::element_children() const {
  std::vector<const Node*> out;
  for (auto& c : children)
    if (c->is_element()) out.push_back(c.get());
  return out;
}

const Node* Node::first_child(std::string_view element_name) const {
  for (auto& c : children)
    if (c->is_element(element_name)) return c.get();
  return nullptr;
}

std::string Node::text_content() const {
  std::string out;
  collect_text(*this, out);
  return out;
}

const Node* Document::document_element() const {
  for (auto& c : root.children)
    if (c->is_element()) return c.get();
  return nullptr;
}

std::string block_text(const Node& node) {
  std::string raw;
  collect_blocks(node, raw);
  std::string out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t end = raw.find('\n', start);
    if (end == std::string::npos) end = raw.size();
    std::string line = text::collapse_whitespace(std::string_view(raw).substr(start, end - start));
    // U+00A0 left by &nbsp; is not collapsed above; treat it as a space.
    for (std::size_t p; (p = line.find("\xC2\xA0")) != std::string::npos;) line.replace(p, 2, " ");
    line = text::collapse_whitespace(line);
    if (!line.empty()) {
      if (!out.empty()) out.push_back('\n');
      out += line;
    }
    start = end + 1;
  }
  return out;
}

}  // namespace openlex::markup
