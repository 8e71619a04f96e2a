#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace openlex::markup {

enum class Mode {
  kXml,   // well-formedness enforced; names are case-sensitive
  kHtml,  // void elements, implicit closes, raw-text script/style, lowercase names
};

struct Node {
  enum class Type { kDocument, kElement, kText };

  Type type = Type::kElement;
  std::string name;  // element name; empty for text/document
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // decoded text for text nodes
  std::vector<std::unique_ptr<Node>> children;
  std::size_t offset = 0;  // byte offset of the node's start in the source

  bool is_element() const { return type == Type::kElement; }
  bool is_element(std::string_view n) const { return type == Type::kElement && name == n; }
  const std::string* attribute(std::string_view key) const;
  bool has_class(std::string_view cls) const;

  std::vector<const Node*> element_children() const;
  const Node* first_child(std::string_view element_name) const;
  /// Concatenated text of all descendant text nodes.
  std::string text_content() const;
};

struct Document {
  Document() { root.type = Node::Type::kDocument; }

  Node root;

  /// First element child of the document node.
  const Node* document_element() const;
};

/// Parses markup into a tree. Throws ParseError with the byte offset of the
/// first construct that cannot be parsed.
Document parse(std::string_view source, Mode mode);

/// Text with block-level elements on their own lines, runs of spaces and
/// tabs collapsed, and each line trimmed. Empty lines are dropped.
std::string block_text(const Node& node);

/// Decodes character references (&amp;, &#233;, &eacute;, ...).
std::string decode_entities(std::string_view s);

}  // namespace openlex::markup
