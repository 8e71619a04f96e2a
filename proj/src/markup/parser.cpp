#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "openlex/error.hpp"
#include "openlex/markup/dom.hpp"
#include "openlex/text/utf8.hpp"

namespace openlex::markup {

namespace {

constexpr std::array<std::string_view, 14> kVoidElements = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr"};

constexpr std::array<std::pair<std::string_view, char32_t>, 40> kNamedEntities = {{
    {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
    {"apos", '\''},    {"nbsp", 0xA0},    {"eacute", 0xE9},  {"Eacute", 0xC9},
    {"egrave", 0xE8},  {"Egrave", 0xC8},  {"ecirc", 0xEA},   {"Ecirc", 0xCA},
    {"euml", 0xEB},    {"agrave", 0xE0},  {"Agrave", 0xC0},  {"acirc", 0xE2},
    {"ccedil", 0xE7},  {"Ccedil", 0xC7},  {"icirc", 0xEE},   {"iuml", 0xEF},
    {"ocirc", 0xF4},   {"ugrave", 0xF9},  {"ucirc", 0xFB},   {"uuml", 0xFC},
    {"oelig", 0x153},  {"OElig", 0x152},  {"laquo", 0xAB},   {"raquo", 0xBB},
    {"rsquo", 0x2019}, {"lsquo", 0x2018}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
    {"ndash", 0x2013}, {"mdash", 0x2014}, {"hellip", 0x2026}, {"copy", 0xA9},
    {"sect", 0xA7},    {"para", 0xB6},    {"middot", 0xB7},  {"deg", 0xB0},
}};

bool is_void(std::string_view name) {
  return std::find(kVoidElements.begin(), kVoidElements.end(), name) != kVoidElements.end();
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' ||
         c == '.' || static_cast<unsigned char>(c) >= 0x80;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, Mode mode) : src_(src), mode_(mode) {}

  Document run() {
    Document doc;
    stack_.push_back(&doc.root);
    while (pos_ < src_.size()) {
      if (src_[pos_] == '<')
        parse_markup();
      else
        parse_text();
    }
    if (stack_.size() > 1) {
      if (mode_ == Mode::kXml)
        throw ParseError("unclosed element <" + stack_.back()->name + ">", src_.size());
      stack_.resize(1);
    }
    if (mode_ == Mode::kXml && doc.document_element() == nullptr)
      throw ParseError("no root element", src_.size());
    return doc;
  }

 private:
  Node* top() { return stack_.back(); }

  bool starts_with(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

  std::size_t find_or_throw(std::string_view needle, const char* what) {
    auto p = src_.find(needle, pos_);
    if (p == std::string_view::npos) throw ParseError(std::string("unterminated ") + what, pos_);
    return p;
  }

  void add_text(std::string decoded, std::size_t at) {
    if (decoded.empty()) return;
    // Merge adjacent text nodes.
    if (!top()->children.empty() && top()->children.back()->type == Node::Type::kText) {
      top()->children.back()->text += decoded;
      return;
    }
    auto n = std::make_unique<Node>();
    n->type = Node::Type::kText;
    n->text = std::move(decoded);
    n->offset = at;
    top()->children.push_back(std::move(n));
  }

  void parse_text() {
    std::size_t start = pos_;
    std::size_t end = src_.find('<', pos_);
    if (end == std::string_view::npos) end = src_.size();
    std::string_view raw = src_.substr(start, end - start);
    pos_ = end;
    if (top()->type == Node::Type::kDocument && text::trim(raw).empty()) return;
    if (mode_ == Mode::kXml && top()->type == Node::Type::kDocument)
      throw ParseError("text outside the root element", start);
    add_text(decode_entities(raw), start);
  }

  void parse_markup() {
    std::size_t start = pos_;
    if (starts_with("<!--")) {
      pos_ = find_or_throw("-->", "comment") + 3;
      return;
    }
    if (starts_with("<![CDATA[")) {
      std::size_t end = find_or_throw("]]>", "CDATA section");
      add_text(std::string(src_.substr(pos_ + 9, end - pos_ - 9)), start);
      pos_ = end + 3;
      return;
    }
    if (starts_with("<?")) {
      pos_ = find_or_throw("?>", "processing instruction") + 2;
      return;
    }
    if (starts_with("<!")) {
      pos_ = find_or_throw(">", "declaration") + 1;
      return;
    }
    if (starts_with("</")) {
      parse_end_tag();
      return;
    }
    if (pos_ + 1 < src_.size() && is_name_char(src_[pos_ + 1]) && src_[pos_ + 1] != '-' &&
        src_[pos_ + 1] != '.') {
      parse_start_tag();
      return;
    }
    if (mode_ == Mode::kXml) throw ParseError("unexpected '<'", start);
    // Stray '<' in HTML text.
    ++pos_;
    add_text("<", start);
  }

  std::string read_name() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
    if (pos_ == start) throw ParseError("expected a name", pos_);
    std::string_view n = src_.substr(start, pos_ - start);
    return mode_ == Mode::kHtml ? lower(n) : std::string(n);
  }

  void skip_space() {
    while (pos_ < src_.size() && text::is_space(src_[pos_])) ++pos_;
  }

  void close_implied(std::string_view opening) {
    if (mode_ != Mode::kHtml) return;
    auto open_is = [&](std::string_view n) { return top()->is_element(n); };
    if (opening == "p" || opening == "div" || opening == "table" || opening == "ul" || opening == "ol") {
      if (open_is("p")) stack_.pop_back();
    } else if (opening == "li") {
      if (open_is("li")) stack_.pop_back();
    } else if (opening == "td" || opening == "th") {
      if (open_is("td") || open_is("th")) stack_.pop_back();
    } else if (opening == "tr") {
      if (open_is("td") || open_is("th")) stack_.pop_back();
      if (open_is("tr")) stack_.pop_back();
    } else if (opening == "dt" || opening == "dd") {
      if (open_is("dt") || open_is("dd")) stack_.pop_back();
    }
  }

  void parse_start_tag() {
    std::size_t start = pos_;
    ++pos_;  // '<'
    auto node = std::make_unique<Node>();
    node->type = Node::Type::kElement;
    node->name = read_name();
    node->offset = start;
    bool self_closing = false;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) throw ParseError("unterminated start tag <" + node->name + ">", start);
      char c = src_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '/') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          pos_ += 2;
          self_closing = true;
          break;
        }
        throw ParseError("unexpected '/' in start tag", pos_);
      }
      if (!is_name_char(c)) throw ParseError(std::string("unexpected character '") + c + "' in start tag", pos_);
      std::string key = read_name();
      skip_space();
      std::string value;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (pos_ >= src_.size()) throw ParseError("missing attribute value", pos_);
        char q = src_[pos_];
        if (q == '"' || q == '\'') {
          std::size_t end = src_.find(q, pos_ + 1);
          if (end == std::string_view::npos) throw ParseError("unterminated attribute value", pos_);
          value = decode_entities(src_.substr(pos_ + 1, end - pos_ - 1));
          pos_ = end + 1;
        } else if (mode_ == Mode::kHtml) {
          std::size_t vstart = pos_;
          while (pos_ < src_.size() && !text::is_space(src_[pos_]) && src_[pos_] != '>') ++pos_;
          value = decode_entities(src_.substr(vstart, pos_ - vstart));
        } else {
          throw ParseError("attribute value must be quoted", pos_);
        }
      } else if (mode_ == Mode::kXml) {
        throw ParseError("attribute without value", pos_);
      }
      node->attributes.emplace_back(std::move(key), std::move(value));
    }

    if (mode_ == Mode::kXml && top()->type == Node::Type::kDocument) {
      for (auto& ch : top()->children)
        if (ch->is_element()) throw ParseError("more than one root element", start);
    }

    close_implied(node->name);
    std::string name = node->name;
    Node* raw = node.get();
    top()->children.push_back(std::move(node));
    if (self_closing || (mode_ == Mode::kHtml && is_void(name))) return;

    if (mode_ == Mode::kHtml && (name == "script" || name == "style")) {
      std::size_t end = src_.find("</" + name, pos_);
      if (end == std::string_view::npos) end = src_.size();
      pos_ = end;
      if (pos_ < src_.size()) {
        std::size_t gt = find_or_throw(">", "end tag");
        pos_ = gt + 1;
      }
      return;
    }
    stack_.push_back(raw);
  }

  void parse_end_tag() {
    std::size_t start = pos_;
    pos_ += 2;
    std::string name = read_name();
    skip_space();
    if (pos_ >= src_.size() || src_[pos_] != '>') throw ParseError("malformed end tag </" + name + ">", start);
    ++pos_;
    if (mode_ == Mode::kXml) {
      if (stack_.size() <= 1 || top()->name != name)
        throw ParseError("mismatched end tag </" + name + ">", start);
      stack_.pop_back();
      return;
    }
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->name == name) {
        stack_.resize(i);
        return;
      }
    }
    // Unmatched end tag in HTML is ignored.
  }

  std::string_view src_;
  Mode mode_;
  std::size_t pos_ = 0;
  std::vector<Node*> stack_;
};

}  // namespace

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c != '&') {
      out.push_back(c);
      ++i;
      continue;
    }
    std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(c);
      ++i;
      continue;
    }
    std::string_view ref = s.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    if (!ref.empty() && ref[0] == '#') {
      unsigned long v = 0;
      std::from_chars_result r{};
      if (ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X'))
        r = std::from_chars(ref.data() + 2, ref.data() + ref.size(), v, 16);
      else
        r = std::from_chars(ref.data() + 1, ref.data() + ref.size(), v, 10);
      if (r.ec == std::errc{} && r.ptr == ref.data() + ref.size() && v > 0 && v < 0x110000)
        cp = static_cast<char32_t>(v);
    } else {
      for (auto& [name, val] : kNamedEntities)
        if (name == ref) cp = val;
    }
    if (cp == 0) {
      out.push_back(c);
      ++i;
      continue;
    }
    text::append_utf8(out, cp);
    i = semi + 1;
  }
  return out;
}

Document parse(std::string_view source, Mode mode) {
  return Parser(source, mode).run();
}

}  // namespace openlex::markup
